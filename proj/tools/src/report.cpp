#include "jetgeo_cli/report.hpp"

#include <algorithm>
#include <cstdio>

namespace jetgeo::cli {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Six-digit mantissa with a bare exponent: 1.000000e0, 2.500000e-7.
std::string short_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  std::string s = buf;
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string exp = s.substr(e + 1);
  const bool negative = exp[0] == '-';
  exp.erase(0, exp.find_first_not_of("+-"));
  exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
  return s.substr(0, e + 1) + (negative ? "-" : "") + exp;
}

std::string signature_text(const std::array<int, 3>& s, const char* open, const char* close,
                           const char* sep) {
  return open + std::to_string(s[0]) + sep + std::to_string(s[1]) + sep + std::to_string(s[2]) + close;
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

void Report::write(std::ostream& out, Format format) const {
  if (format == Format::kKeyValue) {
    out << "command = " << command << '\n';
    if (!source.empty()) out << "source = " << source << '\n';
    if (verdict) {
      out << "class = " << to_string(verdict->form) << '\n';
      out << "c = " << format_real(verdict->c) << '\n';
      out << "residual = " << format_real(verdict->residual) << '\n';
    }
    if (fiber_dimension) out << "fiber_dimension = " << *fiber_dimension << '\n';
    if (killing_dimension) out << "dim = " << *killing_dimension << '\n';
    if (signature) out << "signature = " << signature_text(*signature, "[", "]", ", ") << '\n';
    if (monodromy_defect) out << "monodromy_defect = " << format_real(*monodromy_defect) << '\n';
    if (mc_defect) out << "mc_defect = " << format_real(*mc_defect) << '\n';
    if (jacobi_residual) out << "jacobi_residual = " << format_real(*jacobi_residual) << '\n';
    for (const auto& c : checks) {
      out << "check." << c.name << ".residual = " << format_real(c.residual) << '\n';
      out << "check." << c.name << ".threshold = " << format_real(c.threshold) << '\n';
      out << "check." << c.name << ".pass = " << (c.pass() ? "true" : "false") << '\n';
    }
    return;
  }
  if (verdict)
    out << to_string(verdict->form) << ", c=" << short_real(verdict->c) << ", residual=" << short_real(verdict->residual)
        << '\n';
  if (killing_dimension) {
    out << "dim=" << *killing_dimension;
    if (signature) out << " signature=" << signature_text(*signature, "(", ")", ",");
    if (monodromy_defect) out << " defect=" << short_real(*monodromy_defect);
    out << '\n';
  }
  if (fiber_dimension) out << "fiber dimension: " << *fiber_dimension << '\n';
  if (mc_defect) out << "Maurer-Cartan spread: " << short_real(*mc_defect) << '\n';
  if (jacobi_residual) out << "Jacobi residual: " << short_real(*jacobi_residual) << '\n';
  for (const auto& c : checks)
    out << "  [" << (c.pass() ? "pass" : "FAIL") << "] " << c.name << ": " << short_real(c.residual)
        << " (limit " << short_real(c.threshold) << ")\n";
}

}  // namespace jetgeo::cli
