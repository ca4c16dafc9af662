#include "lilx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "lilx/errors.hpp"

namespace lilx {

const char* to_string(Command c) {
  switch (c) {
    case Command::Scale: return "scale";
    case Command::GumbelTable: return "gumbel-table";
    case Command::Simulate: return "simulate";
    case Command::Expectation: return "expectation";
    case Command::StrongLaw: return "strong-law";
  }
  return "unknown";
}

std::vector<double> default_ln_n_ladder() {
  std::vector<double> out;
  for (double e : {4.0, 8.0, 16.0, 32.0, 64.0}) out.push_back(e * std::numbers::ln10);
  return out;
}

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string cell_csv(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["command"] = to_string(command);
  Json ladder = Json::array();
  for (double v : ln_n_ladder) ladder.push_back(number(v));
  j["ln_n_ladder"] = ladder;
  j["x_grid"] = {{"min", number(x_min)}, {"max", number(x_max)}, {"steps", x_steps}};
  j["sided"] = lilx::to_string(sided);
  j["seed"] = seed;
  j["replicates"] = replicates;
  Json tol = Json::object();
  for (const auto& [k, v] : tolerances) tol[k] = number(v);
  j["tolerances"] = tol;
  Json params = Json::object();
  for (const auto& [k, v] : parameters) params[k] = number(v);
  j["parameters"] = params;
  Json opts = Json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  j["options"] = opts;
  j["output"] = {{"path", output}, {"format", format == OutputFormat::Csv ? "csv" : "json"}};
  return j;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError("row width " + std::to_string(row.size()) + " does not match table " + name);
  }
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw DomainError("table " + name + " has no column " + col);
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (const auto* d = std::get_if<double>(&r[k])) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&r[k])) {
      out.push_back(static_cast<double>(*i));
    } else {
      throw DomainError("column " + col + " is not numeric");
    }
  }
  return out;
}

const Table& ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw DomainError("report has no table " + name);
}

std::string ExperimentReport::to_json() const {
  Json j;
  j["config"] = config.to_json();
  Json ts = Json::object();
  for (const auto& t : tables) {
    Json rows = Json::array();
    for (const auto& r : t.rows) {
      Json row = Json::array();
      for (const auto& c : r) row.push_back(cell_json(c));
      rows.push_back(row);
    }
    ts[t.name] = {{"columns", t.columns}, {"rows", rows}};
  }
  j["tables"] = ts;
  Json prov = provenance;
  prov["artifact_version"] = kArtifactVersion;
  prov["notes"] = notes;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "# command " << to_string(config.command) << " version " << kArtifactVersion
      << " seed " << config.seed << "\n";
  out << "# config " << config.to_json().dump() << "\n";
  for (const auto& n : notes) out << "# note " << n << "\n";
  for (const auto& t : tables) {
    out << "# table " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_csv(r[i]);
      out << "\n";
    }
  }
  return out.str();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_svg(const Table& table, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& title) {
  constexpr double kW = 640, kH = 400, kL = 60, kR = 20, kT = 40, kB = 40;
  const std::vector<double> xs = table.column(x_column);
  std::vector<std::vector<double>> ys;
  for (const auto& c : y_columns) ys.push_back(table.column(c));
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (const auto& col : ys) {
      if (!std::isfinite(xs[i]) || !std::isfinite(col[i])) continue;
      x0 = std::min(x0, xs[i]);
      x1 = std::max(x1, xs[i]);
      y0 = std::min(y0, col[i]);
      y1 = std::max(y1, col[i]);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  char buf[128];
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
    << "</text>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
    << kH - kB << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.4g", xv);
    s << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 15 << "\" text-anchor=\"middle\">"
      << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", yv);
    s << "<text x=\"" << kL - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << buf
      << "</text>\n";
  }
  s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 5 << "\" text-anchor=\"middle\">" << x_column
    << "</text>\n";
  for (std::size_t c = 0; c < ys.size(); ++c) {
    const char* color = colors[c % 10];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[c][i])) continue;
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px(xs[i]), py(ys[c][i]));
      s << buf;
      first = false;
    }
    s << "\"/>\n";
    s << "<text x=\"" << kW - kR - 5 << "\" y=\"" << kT + 14 * (c + 1) << "\" text-anchor=\"end\" fill=\""
      << color << "\">" << y_columns[c] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace lilx
