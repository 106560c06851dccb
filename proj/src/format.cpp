#include "pbergman/format.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace pbergman {

std::string format_double(double x) {
  char buf[40];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_complex(complex z) {
  std::string out = format_double(z.real());
  const std::string im = format_double(z.imag());
  if (im.front() != '-') out += '+';
  out += im;
  out += 'i';
  return out;
}

namespace {

double to_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

complex parse_complex(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty complex number");
  if (const auto comma = text.find(','); comma != std::string_view::npos) {
    return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
  }
  if (text.back() != 'i') return {to_double(text), 0.0};
  text.remove_suffix(1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return to_double(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(text)};
  return {to_double(text.substr(0, split)), imag_part(text.substr(split))};
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.push_back(to_double(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,re_z,im_z,K_p,B_p\n";
  for (const auto& r : rows) {
    out << format_double(r.p) << ',' << format_double(r.z.real()) << ','
        << format_double(r.z.imag()) << ',' << format_double(r.K_p) << ','
        << format_double(r.B_p) << '\n';
  }
}

void write_levi_csv(std::ostream& out, const std::vector<LeviRecord>& rows) {
  out << "p,z,levi,bp2,gap\n";
  for (const auto& r : rows) {
    out << format_double(r.p) << ',' << format_complex(r.z) << ',' << format_double(r.levi)
        << ',' << format_double(r.b_p_squared) << ',' << format_double(r.gap) << '\n';
  }
}

void write_holder_csv(std::ostream& out, const HolderFit& fit) {
  out << "r,delta,fitted\n";
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    out << format_double(fit.radii[i]) << ',' << format_double(fit.deltas[i]) << ','
        << format_double(fit.fitted(fit.radii[i])) << '\n';
  }
}

void write_limit_csv(std::ostream& out, const LimitRecord& record) {
  out << "p,K_p,d_p,restarts,status\n";
  for (const auto& r : record.rows) {
    out << format_double(r.p) << ',' << format_double(r.K_p) << ',' << format_double(r.d_p)
        << ',' << r.restarts << ',' << (r.ok ? "ok" : "error") << '\n';
  }
}

}  // namespace pbergman
