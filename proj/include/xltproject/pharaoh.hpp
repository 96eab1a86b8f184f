#ifndef XLTPROJECT_PHARAOH_HPP
#define XLTPROJECT_PHARAOH_HPP

// Pharaoh alignment text: one line per sentence pair, space-separated "i-j"
// links with 0-based source index i and target index j. An empty line is an
// empty link set. Some aligners emit 1-based indices; convert those first.

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "xltproject/conll.hpp"
#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

namespace detail {

inline bool parse_index(std::string_view digits, std::size_t& value) {
  if (digits.empty()) return false;
  for (char c : digits)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

} // namespace detail

inline Alignment parse_alignment_line(std::string_view line, std::size_t lineno = 1) {
  std::vector<Link> links;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ') {
      ++pos;
      continue;
    }
    auto stop = line.find(' ', pos);
    if (stop == std::string_view::npos) stop = line.size();
    const auto token = line.substr(pos, stop - pos);
    const auto dash = token.find('-');
    Link link;
    if (dash == std::string_view::npos ||
        !detail::parse_index(token.substr(0, dash), link.src) ||
        !detail::parse_index(token.substr(dash + 1), link.tgt))
      throw ParseError("malformed link '" + std::string(token) + "'", lineno, pos + 1);
    links.push_back(link);
    pos = stop;
  }
  return Alignment(std::move(links));
}

inline std::vector<Alignment> read_alignments(std::string_view bytes) {
  std::vector<Alignment> out;
  const auto lines = detail::split_lines(bytes);
  out.reserve(lines.size());
  for (std::size_t n = 0; n < lines.size(); ++n) out.push_back(parse_alignment_line(lines[n], n + 1));
  return out;
}

inline std::string format_alignment(const Alignment& a) {
  std::string out;
  for (const auto& link : a.links()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(link.src);
    out += '-';
    out += std::to_string(link.tgt);
  }
  return out;
}

inline std::string write_alignments(const std::vector<Alignment>& alignments) {
  std::string out;
  for (const auto& a : alignments) {
    out += format_alignment(a);
    out += '\n';
  }
  return out;
}

} // namespace xltproject

#endif // XLTPROJECT_PHARAOH_HPP
