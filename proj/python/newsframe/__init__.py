"""Python access to the newsframe core.

Corpora may be given as a path to a JSONL file, JSONL text, or a list of
article dicts (id, published_at, title, body, ...). Options are config keys
with string-convertible values, as in a ``key = value`` config file.
"""

from __future__ import annotations

import json
import os
from typing import Iterable, Mapping, Sequence, Union

from . import _core
from ._core import Error, ParseError, config_keys

__all__ = [
    "Error",
    "ParseError",
    "config_keys",
    "top_k_keywords",
    "detect_framing_change",
    "em_threshold",
    "classify_change",
    "annual_features",
    "mean_normalized_correlation",
    "loo_evaluate",
    "cohens_kappa",
    "prf1",
    "bootstrap_dataset",
    "run_cli",
]

CorpusLike = Union[str, os.PathLike, Sequence[Mapping]]


def _jsonl(corpus: CorpusLike) -> str:
    if isinstance(corpus, os.PathLike):
        with open(corpus, encoding="utf-8") as f:
            return f.read()
    if isinstance(corpus, str):
        if "\n" not in corpus and os.path.isfile(corpus):
            with open(corpus, encoding="utf-8") as f:
                return f.read()
        return corpus
    return "".join(json.dumps(dict(a), sort_keys=True) + "\n" for a in corpus)


def _options(options: Mapping | None) -> dict:
    out = {}
    for k, v in (options or {}).items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        out[k] = str(v)
    return out


def top_k_keywords(t1: CorpusLike, t2: CorpusLike, **options) -> list:
    """[(ngram, ig_bits), ...] sorted by IG descending."""
    return _core.top_k_keywords(_jsonl(t1), _jsonl(t2), _options(options))


def detect_framing_change(t1: CorpusLike, t2: CorpusLike, score_pool: Iterable[float] = (), **options) -> dict:
    return json.loads(_core.detect_framing_change(_jsonl(t1), _jsonl(t2), _options(options), list(score_pool)))


def em_threshold(scores: Iterable[float]) -> float:
    return _core.em_threshold(list(scores))


def classify_change(score: float, threshold: float, mode: str = "mean_similarity") -> str:
    return _core.classify_change(score, threshold, mode)


def annual_features(corpus: CorpusLike, topic: str = "", laws_csv: str = "", **options) -> dict:
    return _core.annual_features(_jsonl(corpus), topic, laws_csv, _options(options))


def mean_normalized_correlation(rows: Sequence[Sequence[int]]) -> float:
    return _core.mean_normalized_correlation([list(r) for r in rows])


def loo_evaluate(series_csv: Mapping[str, str], **options) -> dict:
    """Leave-one-topic-out evaluation over {topic: series CSV text}."""
    return json.loads(_core.loo_evaluate(dict(series_csv), _options(options)))


def cohens_kappa(codes_a: Sequence[str], codes_b: Sequence[str]) -> float:
    return _core.cohens_kappa(list(codes_a), list(codes_b))


def prf1(tp: int, fp: int, fn: int) -> tuple:
    return _core.prf1(tp, fp, fn)


def bootstrap_dataset(seeds_csv: str, universal: CorpusLike, **options) -> dict:
    out = _core.bootstrap_dataset(seeds_csv, _jsonl(universal), _options(options))
    out["provenance"] = json.loads(out["provenance"])
    return out


def run_cli(args: Sequence[str]) -> tuple:
    """(exit_code, stdout, stderr) of one CLI invocation."""
    return _core.run_cli([str(a) for a in args])
