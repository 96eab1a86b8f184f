#ifndef XLTPROJECT_DETAIL_PARALLEL_HPP
#define XLTPROJECT_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace xltproject::detail {

/// Evaluates fn(i) for i in [0, n) on up to `workers` threads and returns the
/// results in index order. If any call throws, the exception of the lowest
/// failing index is rethrown, so failures are independent of scheduling.
template <class Fn>
auto ordered_map(std::size_t n, std::size_t workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

} // namespace xltproject::detail

#endif // XLTPROJECT_DETAIL_PARALLEL_HPP
