#include "loewner/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner::io {

using diagnostics::DiagnosticsReport;
using diagnostics::ReportEntry;

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "'");
}

std::vector<std::vector<std::string>> read_rows(const std::string& text,
                                                const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw Error(ErrorCode::InvalidArgument, "expected header '" + header + "', got '" + line + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

std::string entry_key(const ReportEntry& e) {
  return std::to_string(e.window_id) + "," + to_string(e.time_kind);
}

template <typename Fn>
void for_each_entry(const DiagnosticsReport& r, Fn&& fn) {
  for (const auto& e : r.global) fn(e);
  for (const auto& e : r.entries) fn(e);
}

}  // namespace

std::string driving_csv(const DrivingFunction& driving) {
  std::string out = "time,value,time_kind\n";
  const std::string kind = to_string(driving.time_kind);
  for (std::size_t i = 0; i < driving.size(); ++i) {
    out += format_number(driving.times[i]) + "," + format_number(driving.values[i]) + "," + kind + "\n";
  }
  return out;
}

DrivingFunction parse_driving_csv(const std::string& text) {
  DrivingFunction d;
  bool first = true;
  for (const auto& row : read_rows(text, "time,value,time_kind")) {
    if (row.size() != 3) throw Error(ErrorCode::InvalidArgument, "driver rows need 3 fields");
    const TimeKind kind = time_kind_from_string(row[2]);
    if (first) {
      d.time_kind = kind;
      first = false;
    } else if (kind != d.time_kind) {
      throw Error(ErrorCode::InvalidArgument, "mixed time kinds in driver CSV");
    }
    d.times.push_back(parse_number(row[0]));
    d.values.push_back(parse_number(row[1]));
  }
  d.validate();
  return d;
}

std::string trace_csv(const Trace& trace) {
  std::string out = "re,im\n";
  for (const auto& z : trace.points) out += format_number(z.real()) + "," + format_number(z.imag()) + "\n";
  return out;
}

Trace parse_trace_csv(const std::string& text) {
  Trace t;
  for (const auto& row : read_rows(text, "re,im")) {
    if (row.size() != 2) throw Error(ErrorCode::InvalidArgument, "trace rows need 2 fields");
    t.points.emplace_back(parse_number(row[0]), parse_number(row[1]));
  }
  if (!t.points.empty()) t.base = t.points.front().real();
  return t;
}

std::string samples_csv(const std::vector<double>& samples) {
  std::string out = "value\n";
  for (double v : samples) out += format_number(v) + "\n";
  return out;
}

std::string psd_table(const DiagnosticsReport& report) {
  std::string out = "window_id,time_kind,frequency,power\n";
  for_each_entry(report, [&](const ReportEntry& e) {
    if (!e.diagnostics || !e.diagnostics->psd) return;
    const auto& psd = *e.diagnostics->psd;
    for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
      out += entry_key(e) + "," + format_number(psd.frequencies[k]) + "," +
             format_number(psd.powers[k]) + "\n";
    }
  });
  return out;
}

std::string qq_table(const DiagnosticsReport& report) {
  std::string out = "window_id,time_kind,series,theoretical,empirical\n";
  for_each_entry(report, [&](const ReportEntry& e) {
    if (!e.diagnostics) return;
    auto emit = [&](const std::optional<diagnostics::QQResult>& qq, const char* series) {
      if (!qq) return;
      for (std::size_t i = 0; i < qq->theoretical.size(); ++i) {
        out += entry_key(e) + "," + series + "," + format_number(qq->theoretical[i]) + "," +
               format_number(qq->empirical[i]) + "\n";
      }
    };
    emit(e.diagnostics->qq_increments, "increments");
    emit(e.diagnostics->qq_raw, "raw");
  });
  return out;
}

std::string acf_table(const DiagnosticsReport& report) {
  std::string out = "window_id,time_kind,lag,acf\n";
  for_each_entry(report, [&](const ReportEntry& e) {
    if (!e.diagnostics) return;
    const auto& acf = e.diagnostics->acf;
    for (std::size_t l = 0; l < acf.size(); ++l) {
      out += entry_key(e) + "," + std::to_string(l) + "," + format_number(acf[l]) + "\n";
    }
  });
  return out;
}

std::string boxcount_table(const DiagnosticsReport& report) {
  std::string out = "window_id,time_kind,scale,count\n";
  for_each_entry(report, [&](const ReportEntry& e) {
    if (!e.dimension) return;
    for (std::size_t i = 0; i < e.dimension->scales.size(); ++i) {
      out += entry_key(e) + "," + format_number(e.dimension->scales[i]) + "," +
             format_number(e.dimension->counts[i]) + "\n";
    }
  });
  return out;
}

std::string hill_table(const DiagnosticsReport& report) {
  std::string out = "window_id,time_kind,n0,alpha_hat\n";
  for_each_entry(report, [&](const ReportEntry& e) {
    if (!e.diagnostics) return;
    for (const auto& h : e.diagnostics->hill_curve) {
      out += entry_key(e) + "," + std::to_string(h.n0) + "," + format_number(h.alpha_hat) + "\n";
    }
  });
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace loewner::io
