#include "sisnet/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace sisnet {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& current_handler() {
  static WarningHandler handler = [](std::string_view message) {
    std::cerr << "sisnet: warning: " << message << '\n';
  };
  return handler;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  WarningHandler previous = std::move(current_handler());
  current_handler() = handler ? std::move(handler) : [](std::string_view) {};
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (current_handler()) current_handler()(message);
}

}  // namespace sisnet
