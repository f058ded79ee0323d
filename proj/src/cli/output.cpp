#include "kpa/cli/output.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace kpa::cli {

namespace {

std::string number(expr::Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6Lg", v);
  return buf;
}

std::string verdict_word(const canonical::Entry& e) {
  if (e.tripwire) return "TRIPWIRE";
  return e.pass ? "PASS" : "FAIL";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

bool color_enabled() {
  if (const char* v = std::getenv("KPA_COLOR")) return std::string(v) != "0";
  return ::isatty(STDOUT_FILENO) != 0;
}

int exit_code(const canonical::Report& report) { return report.all_pass() && !report.tripwire() ? 0 : 1; }

std::string render_text(const canonical::Report& report, const RunInfo& info, bool color) {
  const char* green = color ? "\033[32m" : "";
  const char* red = color ? "\033[31m" : "";
  const char* yellow = color ? "\033[33m" : "";
  const char* reset = color ? "\033[0m" : "";
  std::ostringstream out;
  out << "kpa verify  basis=" << info.basis << "  seed=" << info.opts.seed << "  samples=" << info.opts.samples
      << "  mode=" << (info.opts.mode ? expr::to_string(*info.opts.mode) : std::string("auto")) << "\n";
  std::string suite;
  int pass = 0;
  int fail = 0;
  for (const auto& e : report.entries) {
    if (e.suite != suite) {
      suite = e.suite;
      out << "[" << suite << "]\n";
    }
    (e.pass && !e.tripwire ? pass : fail)++;
    const std::string word = verdict_word(e);
    const char* c = e.tripwire ? yellow : (e.pass ? green : red);
    out << "  " << c << pad(word, 8) << reset << pad(e.tag, 8) << pad(e.mode, 11) << e.relation;
    if (e.on_shell) out << "  " << yellow << "[on-shell]" << reset;
    if (e.numeric_only) out << "  " << yellow << "[numeric only]" << reset;
    out << "\n";
    if (!e.pass || e.tripwire) {
      out << "          residual: " << e.residual << "\n";
      if (e.has_evidence) {
        out << "          numeric: " << e.evidence.points << " points, max deviation "
            << number(e.evidence.max_deviation);
        if (e.evidence.worst) out << " at " << expr::point_text(*e.evidence.worst);
        out << "\n";
      }
    }
    if (!e.note.empty()) out << "          note: " << e.note << "\n";
  }
  out << "summary: " << pass << " pass, " << fail << " fail";
  if (info.wall_seconds) out << "  (" << number(*info.wall_seconds) << " s)";
  out << "\n";
  if (report.tripwire())
    out << "aborted: a symbolic pass was contradicted by the numeric oracle; see TRIPWIRE entries\n";
  return out.str();
}

nlohmann::ordered_json entry_json(const canonical::Entry& e) {
  nlohmann::ordered_json j;
  j["suite"] = e.suite;
  j["relation"] = e.relation;
  j["paper_tag"] = e.tag;
  j["mode"] = e.mode;
  j["verdict"] = e.tripwire ? "tripwire" : (e.pass ? "pass" : "fail");
  j["residual"] = e.residual;
  if (e.has_evidence) {
    nlohmann::ordered_json ev;
    ev["points"] = e.evidence.points;
    ev["max_deviation"] = static_cast<double>(e.evidence.max_deviation);
    ev["pass"] = e.evidence.pass;
    if (e.evidence.worst) {
      nlohmann::ordered_json pt;
      for (const auto& [k, v] : e.evidence.worst->values) pt[k] = static_cast<double>(v);
      ev["worst_point"] = pt;
      ev["worst_lhs"] = static_cast<double>(e.evidence.worst_lhs);
      ev["worst_rhs"] = static_cast<double>(e.evidence.worst_rhs);
    }
    j["evidence"] = ev;
  } else {
    j["evidence"] = nullptr;
  }
  j["seed"] = e.seed;
  j["on_shell"] = e.on_shell;
  j["numeric_only"] = e.numeric_only;
  j["note"] = e.note;
  return j;
}

nlohmann::ordered_json render_json(const canonical::Report& report, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["basis"] = info.basis;
  j["seed"] = info.opts.seed;
  j["samples"] = info.opts.samples;
  j["tolerance"] = info.opts.tolerance;
  j["mode"] = info.opts.mode ? expr::to_string(*info.opts.mode) : std::string("auto");
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  int pass = 0;
  for (const auto& e : report.entries) {
    entries.push_back(entry_json(e));
    if (e.pass && !e.tripwire) ++pass;
  }
  j["entries"] = entries;
  j["summary"] = {{"pass", pass},
                  {"fail", static_cast<int>(report.entries.size()) - pass},
                  {"tripwire", report.tripwire()},
                  {"all_pass", exit_code(report) == 0}};
  if (info.wall_seconds) j["wall_time_s"] = *info.wall_seconds;
  return j;
}

}  // namespace kpa::cli
