#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "newsframe/ingest.hpp"

namespace newsframe {

struct CliIo {
  std::ostream& out;
  std::ostream& err;
  // Transport for `fetch`; the real HTTP client when unset.
  std::function<std::unique_ptr<HttpTransport>()> http;
};

/// Runs one CLI invocation. `args` excludes the program name.
/// Returns 0 on success, 2 for usage and input errors, 3 for runtime errors.
int run_cli(const std::vector<std::string>& args, CliIo io);

}  // namespace newsframe
