#pragma once

#include <functional>
#include <string_view>

namespace sisnet {

using WarningHandler = std::function<void(std::string_view)>;

// Installs the sink for non-fatal diagnostics (assumption violations, h
// ignored by the product model, negative estimates). Returns the previous
// handler. The default writes "sisnet: warning: ..." to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

// RAII helper that redirects warnings for the lifetime of the object.
class ScopedWarningHandler {
 public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }
  ScopedWarningHandler(const ScopedWarningHandler&) = delete;
  ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace sisnet
