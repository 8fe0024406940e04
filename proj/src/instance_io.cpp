#include "fvrptw/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fvrptw/numfmt.hpp"

namespace fvrptw {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_number(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size() && std::isfinite(out);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line.substr(0, line.find('#')));
  for (std::string t; is >> t;) tokens.push_back(t);
  return tokens;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    for (std::string line; std::getline(in_, line);) {
      ++line_;
      tokens = tokenize(line);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  double number(const std::string& token, const char* field) const {
    double v = 0.0;
    if (!parse_number(token, v)) fail(std::string("malformed ") + field + " '" + token + "'");
    return v;
  }

  int integer(const std::string& token, const char* field) const {
    int v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
      fail(std::string("malformed ") + field + " '" + token + "'");
    return v;
  }

  void expect_arity(const std::vector<std::string>& t, std::size_t n, const char* what) const {
    if (t.size() != n)
      fail(std::string(what) + " expects " + std::to_string(n - 1) + " values, got " +
           std::to_string(t.size() - 1));
  }

  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

struct NodeRecord {
  Customer customer;
  std::optional<std::pair<double, double>> xy;
  std::size_t line = 0;
};

}  // namespace

Instance parse_instance(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::string> t;

  if (!reader.next(t) || t[0] != kInstanceFormatTag)
    reader.fail(std::string("missing '") + kInstanceFormatTag + " <version>' header");
  if (t.size() != 2 || reader.integer(t[1], "format version") != kInstanceFormatVersion)
    reader.fail("unsupported instance format version");

  Instance inst;
  std::optional<double> capacity, depot_close;
  enum class Travel { Unset, Coordinates, Matrix } travel = Travel::Unset;
  double f_lo = 0.8, f_hi = 1.3;
  std::map<int, NodeRecord> nodes;
  std::map<int, std::pair<std::vector<double>, std::size_t>> dist_rows;
  std::map<int, std::pair<std::vector<Tfn>, std::size_t>> fuzzy_rows;

  while (reader.next(t)) {
    const std::string& key = t[0];
    if (key == "name") {
      reader.expect_arity(t, 2, "name");
      inst.name = t[1];
    } else if (key == "capacity") {
      reader.expect_arity(t, 2, "capacity");
      capacity = reader.number(t[1], "capacity");
      if (!(*capacity > 0.0)) reader.fail("capacity must be positive");
    } else if (key == "depot_close") {
      reader.expect_arity(t, 2, "depot_close");
      depot_close = reader.number(t[1], "depot_close");
    } else if (key == "travel") {
      if (t.size() == 2 && t[1] == "matrix") {
        travel = Travel::Matrix;
      } else if (t.size() == 4 && t[1] == "coordinates") {
        travel = Travel::Coordinates;
        f_lo = reader.number(t[2], "fuzzy low factor");
        f_hi = reader.number(t[3], "fuzzy high factor");
        if (!(0.0 <= f_lo && f_lo <= 1.0 && 1.0 <= f_hi))
          reader.fail("fuzzy factors must satisfy 0 <= lo <= 1 <= hi");
      } else {
        reader.fail("expected 'travel matrix' or 'travel coordinates <lo> <hi>'");
      }
    } else if (key == "node") {
      if (t.size() != 6 && t.size() != 8) reader.fail("node expects 5 values (+ optional x y)");
      NodeRecord rec;
      rec.line = reader.line();
      rec.customer.id = reader.integer(t[1], "node id");
      rec.customer.demand = reader.number(t[2], "demand");
      rec.customer.window_open = reader.number(t[3], "window open");
      rec.customer.window_close = reader.number(t[4], "window close");
      rec.customer.service_time = reader.number(t[5], "service time");
      if (t.size() == 8) rec.xy = {reader.number(t[6], "x"), reader.number(t[7], "y")};
      if (rec.customer.id < 0) reader.fail("negative node id");
      if (rec.customer.demand < 0.0) reader.fail("negative demand");
      if (rec.customer.service_time < 0.0) reader.fail("negative service time");
      if (rec.customer.window_open > rec.customer.window_close) reader.fail("window open after close");
      if (!nodes.emplace(rec.customer.id, rec).second)
        reader.fail("duplicate node " + std::to_string(rec.customer.id));
    } else if (key == "distance") {
      if (t.size() < 2) reader.fail("distance row needs an index");
      const int row = reader.integer(t[1], "row index");
      std::vector<double> values;
      for (std::size_t k = 2; k < t.size(); ++k) {
        values.push_back(reader.number(t[k], "distance"));
        if (values.back() < 0.0) reader.fail("negative distance");
      }
      if (!dist_rows.emplace(row, std::make_pair(values, reader.line())).second)
        reader.fail("duplicate distance row " + std::to_string(row));
    } else if (key == "fuzzy") {
      if (t.size() < 2) reader.fail("fuzzy row needs an index");
      const int row = reader.integer(t[1], "row index");
      std::vector<Tfn> values;
      for (std::size_t k = 2; k < t.size(); ++k) {
        const std::string& tok = t[k];
        const auto p1 = tok.find(',');
        const auto p2 = p1 == std::string::npos ? p1 : tok.find(',', p1 + 1);
        if (p2 == std::string::npos) reader.fail("fuzzy entry '" + tok + "' is not a,b,c");
        Tfn v{reader.number(tok.substr(0, p1), "fuzzy a"),
              reader.number(tok.substr(p1 + 1, p2 - p1 - 1), "fuzzy b"),
              reader.number(tok.substr(p2 + 1), "fuzzy c")};
        if (v.a > v.b) reader.fail("fuzzy entry '" + tok + "' has a > b");
        if (v.b > v.c) reader.fail("fuzzy entry '" + tok + "' has b > c");
        if (v.a < 0.0) reader.fail("fuzzy entry '" + tok + "' has negative support");
        values.push_back(v);
      }
      if (!fuzzy_rows.emplace(row, std::make_pair(values, reader.line())).second)
        reader.fail("duplicate fuzzy row " + std::to_string(row));
    } else {
      reader.fail("unknown record '" + key + "'");
    }
  }

  const std::size_t end_line = reader.line();
  auto fail_at = [&](std::size_t line, const std::string& what) -> void {
    throw ParseError(source, line, what);
  };
  if (!capacity) fail_at(end_line, "missing 'capacity'");
  if (!depot_close) fail_at(end_line, "missing 'depot_close'");
  if (travel == Travel::Unset) fail_at(end_line, "missing 'travel' record");
  if (nodes.empty()) fail_at(end_line, "no node records");

  const std::size_t n = nodes.size();
  if (nodes.rbegin()->first != static_cast<int>(n - 1))
    fail_at(end_line, "node ids must be 0.." + std::to_string(n - 1) + " without gaps");

  inst.vehicle_capacity = *capacity;
  inst.depot_close = *depot_close;
  for (const auto& [id, rec] : nodes) {
    if (rec.customer.demand > *capacity) fail_at(rec.line, "demand exceeds vehicle capacity");
    if (id == 0 && rec.customer.demand != 0.0) fail_at(rec.line, "depot demand must be zero");
    inst.customers.push_back(rec.customer);
  }

  inst.distance = SquareMatrix<double>(n, 0.0);
  inst.travel = SquareMatrix<Tfn>(n, Tfn{});
  if (travel == Travel::Coordinates) {
    if (!dist_rows.empty() || !fuzzy_rows.empty())
      fail_at(end_line, "matrix rows are not allowed with 'travel coordinates'");
    for (const auto& [id, rec] : nodes)
      if (!rec.xy) fail_at(rec.line, "node " + std::to_string(id) + " needs x y coordinates");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto [xi, yi] = *nodes.at(static_cast<int>(i)).xy;
        const auto [xj, yj] = *nodes.at(static_cast<int>(j)).xy;
        const double d = std::hypot(xi - xj, yi - yj);
        inst.distance(i, j) = d;
        inst.travel(i, j) = {f_lo * d, d, f_hi * d};
      }
  } else {
    if (dist_rows.size() != n || fuzzy_rows.size() != n)
      fail_at(end_line, "matrix mode needs " + std::to_string(n) + " distance and fuzzy rows");
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = dist_rows.find(static_cast<int>(i));
      const auto f = fuzzy_rows.find(static_cast<int>(i));
      if (d == dist_rows.end() || f == fuzzy_rows.end())
        fail_at(end_line, "missing matrix row " + std::to_string(i));
      if (d->second.first.size() != n)
        fail_at(d->second.second, "distance row has " + std::to_string(d->second.first.size()) +
                                      " entries, expected " + std::to_string(n));
      if (f->second.first.size() != n)
        fail_at(f->second.second, "fuzzy row has " + std::to_string(f->second.first.size()) +
                                      " entries, expected " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j) {
        inst.distance(i, j) = d->second.first[j];
        inst.travel(i, j) = f->second.first[j];
      }
      if (inst.distance(i, i) != 0.0) fail_at(d->second.second, "distance diagonal must be zero");
    }
  }

  try {
    inst.validate();
  } catch (const InstanceError& e) {
    fail_at(end_line, e.what());
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path.string() + "'");
  return parse_instance(in, path.string());
}

void write_instance(std::ostream& out, const Instance& inst) {
  const std::size_t n = inst.node_count();
  out << kInstanceFormatTag << ' ' << kInstanceFormatVersion << '\n';
  if (!inst.name.empty()) out << "name " << inst.name << '\n';
  out << "capacity " << format_number(inst.vehicle_capacity) << '\n';
  out << "depot_close " << format_number(inst.depot_close) << '\n';
  out << "travel matrix\n";
  out << "# node id demand open close service\n";
  for (const auto& c : inst.customers) {
    out << "node " << c.id << ' ' << format_number(c.demand) << ' ' << format_number(c.window_open)
        << ' ' << format_number(c.window_close) << ' ' << format_number(c.service_time) << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    out << "distance " << i;
    for (std::size_t j = 0; j < n; ++j) out << ' ' << format_number(inst.distance(i, j));
    out << '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    out << "fuzzy " << i;
    for (std::size_t j = 0; j < n; ++j) {
      const Tfn& v = inst.travel(i, j);
      out << ' ' << format_number(v.a) << ',' << format_number(v.b) << ',' << format_number(v.c);
    }
    out << '\n';
  }
}

std::vector<std::vector<NodeId>> parse_plan(std::istream& in, const std::string& source) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<std::vector<NodeId>> routes;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto doc = nlohmann::json::parse(text);
      const auto& js = doc.contains("solution") ? doc.at("solution") : doc;
      for (const auto& r : js.at("routes")) {
        const auto& stops = r.is_array() ? r : r.at("stops");
        routes.push_back(stops.get<std::vector<NodeId>>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, 1, std::string("malformed plan document: ") + e.what());
    }
    return routes;
  }

  std::istringstream is(text);
  LineReader reader(is, source);
  std::vector<std::string> t;
  if (!reader.next(t) || t.size() != 2 || t[0] != kPlanFormatTag)
    reader.fail(std::string("missing '") + kPlanFormatTag + " <version>' header");
  while (reader.next(t)) {
    if (t[0] != "route") reader.fail("unknown record '" + t[0] + "'");
    std::vector<NodeId> seq;
    for (std::size_t k = 1; k < t.size(); ++k) seq.push_back(reader.integer(t[k], "customer id"));
    if (seq.empty()) reader.fail("route has no stops");
    routes.push_back(std::move(seq));
  }
  return routes;
}

std::vector<std::vector<NodeId>> load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file '" + path.string() + "'");
  return parse_plan(in, path.string());
}

}  // namespace fvrptw
