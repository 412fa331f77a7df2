#ifndef BEZPROJ_DIAGNOSTICS_HPP
#define BEZPROJ_DIAGNOSTICS_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace bezproj {

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {

inline std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

inline WarningHandler& warning_handler() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "bezproj: warning: " << msg << '\n'; };
  return h;
}

// One bit per degree so the high-degree warning fires once per degree.
inline std::atomic<std::uint64_t>& warned_degrees() {
  static std::atomic<std::uint64_t> bits{0};
  return bits;
}

}  // namespace detail

/// Replaces the warning sink; returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(detail::warning_mutex());
  return std::exchange(detail::warning_handler(), std::move(h));
}

inline void warn(const std::string& msg) {
  std::lock_guard lock(detail::warning_mutex());
  if (detail::warning_handler()) detail::warning_handler()(msg);
}

/// Bernstein operators lose accuracy quickly past degree 5.
inline void check_degree(int p) {
  if (p <= 5) return;
  const std::uint64_t bit = std::uint64_t{1} << (p < 63 ? p : 63);
  if (detail::warned_degrees().fetch_or(bit) & bit) return;
  warn("degree " + std::to_string(p) +
       " > 5: Bernstein Gramian is ill-conditioned, expect an accuracy floor");
}

inline void reset_degree_warnings() { detail::warned_degrees().store(0); }

}  // namespace bezproj

#endif  // BEZPROJ_DIAGNOSTICS_HPP
