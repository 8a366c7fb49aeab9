#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gibbs/cli.hpp"
#include "gibbs/curves.hpp"
#include "gibbs/errors.hpp"

namespace gibbs::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v.front() == '+') ++first;
  const auto [end, ec] = std::from_chars(first, v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) {
    throw InvalidArgument("config: '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) {
    throw InvalidArgument("config: '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.find(',', start);
    out.push_back(to_double(key, v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Full precision so the text form round-trips.
std::string exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string exact_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += exact(v[i]);
  }
  return s;
}

}  // namespace

void set_key(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "command") {
    c.command = std::string(value);
  } else if (key == "model") {
    c.model = std::string(value);
  } else if (key == "mu") {
    c.mu = to_double(key, value);
  } else if (key == "mu_list") {
    c.mu_list = to_list(key, value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "n_samples") {
    c.n_samples = to_int<std::size_t>(key, value);
  } else if (key == "grid") {
    parse_grid(value);
    c.grid = std::string(value);
  } else if (key == "exclude") {
    const auto v = to_list(key, value);
    if (v.size() != 2 || !(v[0] < v[1])) throw InvalidArgument("config: exclude expects 'l1,l2' with l1 < l2");
    c.exclude = std::make_pair(v[0], v[1]);
  } else if (key == "eps_tail") {
    c.eps_tail = to_double(key, value);
    if (!(c.eps_tail > 0.0 && c.eps_tail < 1.0)) throw InvalidArgument("config: eps_tail must be in (0, 1)");
  } else if (key == "rel_tol") {
    c.rel_tol = to_double(key, value);
    if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) throw InvalidArgument("config: rel_tol must be in (0, 1)");
  } else if (key == "output") {
    c.output = std::string(value);
  } else if (key == "oracle") {
    c.oracle = std::string(value);
  } else if (key == "zeta") {
    c.zeta = to_double(key, value);
  } else if (key == "M") {
    c.M = to_int<int>(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!seen.insert(std::string(key)).second) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
    }
    set_key(c, key, line.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  if (!c.command.empty()) out << "command=" << c.command << '\n';
  if (!c.model.empty()) out << "model=" << c.model << '\n';
  if (c.mu) out << "mu=" << exact(*c.mu) << '\n';
  if (!c.mu_list.empty()) out << "mu_list=" << exact_list(c.mu_list) << '\n';
  out << "seed=" << c.seed << '\n';
  out << "n_samples=" << c.n_samples << '\n';
  if (!c.grid.empty()) out << "grid=" << c.grid << '\n';
  if (c.exclude) out << "exclude=" << exact(c.exclude->first) << ',' << exact(c.exclude->second) << '\n';
  out << "eps_tail=" << exact(c.eps_tail) << '\n';
  out << "rel_tol=" << exact(c.rel_tol) << '\n';
  if (!c.output.empty()) out << "output=" << c.output << '\n';
  out << "oracle=" << c.oracle << '\n';
  if (c.zeta) out << "zeta=" << exact(*c.zeta) << '\n';
  if (c.M != 0) out << "M=" << c.M << '\n';
  return out.str();
}

}  // namespace gibbs::cli
