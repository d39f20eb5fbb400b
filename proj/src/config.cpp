#include "stq/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "stq/error.hpp"
#include "stq/riccati.hpp"

namespace stq {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

// Nested bracketed list of numbers.
struct Value {
  bool is_list = false;
  double number = 0.0;
  std::vector<Value> items;
};

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string key) : text_(text), key_(std::move(key)) {}

  Value parse() {
    Value v = parse_value();
    skip_space();
    if (pos_ != text_.size()) {
      fail("trailing characters");
    }
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("cannot parse value of '" + key_ + "': " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  Value parse_value() {
    skip_space();
    if (pos_ >= text_.size()) {
      fail("unexpected end of input");
    }
    if (text_[pos_] == '[') {
      ++pos_;
      Value list;
      list.is_list = true;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return list;
      }
      while (true) {
        list.items.push_back(parse_value());
        skip_space();
        if (pos_ >= text_.size()) {
          fail("missing ']'");
        }
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          return list;
        }
        fail(std::string("unexpected '") + text_[pos_] + "'");
      }
    }
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    Value v;
    const auto* first = text_.data() + pos_;
    const auto* last = text_.data() + end;
    if (*first == '+') {
      ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v.number);
    if (ec != std::errc() || ptr != last) {
      fail("'" + std::string(text_.substr(pos_, end - pos_)) + "' is not a number");
    }
    pos_ = end;
    return v;
  }

  std::string_view text_;
  std::string key_;
  std::size_t pos_ = 0;
};

// Typed access to the entry map.  Every key read is remembered so unknown
// keys can be reported afterwards.
class Reader {
 public:
  explicit Reader(const ConfigEntries& entries) : entries_(entries) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return entries_.count(key) > 0;
  }

  const std::string& raw(const std::string& key) {
    used_.insert(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError("missing required key '" + key + "'");
    }
    return it->second;
  }

  Value value(const std::string& key) { return ValueParser(raw(key), key).parse(); }

  double number(const std::string& key) {
    Value v = value(key);
    if (v.is_list) {
      throw ConfigError("'" + key + "' must be a number");
    }
    return v.number;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) {
      return fallback;
    }
    const double v = number(key);
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ConfigError("'" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
  }

  Matrix matrix(const std::string& key) {
    Value v = value(key);
    if (!v.is_list) {
      return Matrix::Constant(1, 1, v.number);
    }
    if (v.items.empty()) {
      throw ConfigError("'" + key + "' is empty");
    }
    // A flat list is read as a column.
    if (!v.items.front().is_list) {
      Matrix col(static_cast<Eigen::Index>(v.items.size()), 1);
      for (std::size_t r = 0; r < v.items.size(); ++r) {
        if (v.items[r].is_list) {
          throw ConfigError("'" + key + "' mixes numbers and rows");
        }
        col(static_cast<Eigen::Index>(r), 0) = v.items[r].number;
      }
      return col;
    }
    const std::size_t cols = v.items.front().items.size();
    Matrix M(static_cast<Eigen::Index>(v.items.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < v.items.size(); ++r) {
      const auto& row = v.items[r];
      if (!row.is_list || row.items.size() != cols) {
        throw ConfigError("'" + key + "' has ragged rows");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (row.items[c].is_list) {
          throw ConfigError("'" + key + "' nests deeper than a matrix");
        }
        M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.items[c].number;
      }
    }
    return M;
  }

  /// Scalar broadcast to `length`, or an explicit list of that length.
  std::vector<double> per_agent(const std::string& key, std::size_t length, double fallback) {
    if (!has(key)) {
      return std::vector<double>(length, fallback);
    }
    Value v = value(key);
    if (!v.is_list) {
      return std::vector<double>(length, v.number);
    }
    if (v.items.size() != length) {
      throw ConfigError("'" + key + "' must list " + std::to_string(length) + " values");
    }
    std::vector<double> out;
    for (const auto& item : v.items) {
      if (item.is_list) {
        throw ConfigError("'" + key + "' must be a flat list");
      }
      out.push_back(item.number);
    }
    return out;
  }

  std::vector<Graph::Edge> edges(const std::string& key, std::size_t nodes) {
    Value v = value(key);
    if (!v.is_list) {
      throw ConfigError("'" + key + "' must be a list of [i, j] pairs");
    }
    std::vector<Graph::Edge> out;
    for (const auto& e : v.items) {
      if (!e.is_list || e.items.size() != 2 || e.items[0].is_list || e.items[1].is_list) {
        throw ConfigError("'" + key + "' must be a list of [i, j] pairs");
      }
      const double a = e.items[0].number;
      const double b = e.items[1].number;
      if (a < 1 || b < 1 || a > static_cast<double>(nodes) || b > static_cast<double>(nodes) ||
          a != static_cast<double>(static_cast<std::size_t>(a)) ||
          b != static_cast<double>(static_cast<std::size_t>(b))) {
        throw ConfigError("'" + key + "' has an endpoint outside 1.." + std::to_string(nodes));
      }
      out.emplace_back(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1);
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : entries_) {
      if (used_.count(key) == 0) {
        throw ConfigError("unknown configuration key '" + key + "'");
      }
    }
  }

 private:
  const ConfigEntries& entries_;
  std::set<std::string> used_;
};

// Per-agent blocks from either a stacked (L*rows x cols) matrix or a full
// block-diagonal (L*rows x L*cols) one.  A scalar means value * identity.
std::vector<Matrix> agent_blocks(const Matrix& M, std::size_t agents, std::size_t rows,
                                 std::size_t cols, const std::string& name) {
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(cols);
  const auto L = static_cast<Eigen::Index>(agents);
  std::vector<Matrix> out;
  if (M.rows() == 1 && M.cols() == 1 && rows == cols) {
    for (std::size_t i = 0; i < agents; ++i) {
      out.push_back(M(0, 0) * Matrix::Identity(r, c));
    }
    return out;
  }
  if (M.rows() == L * r && M.cols() == c) {
    for (Eigen::Index i = 0; i < L; ++i) {
      out.push_back(M.block(i * r, 0, r, c));
    }
    return out;
  }
  if (M.rows() == L * r && M.cols() == L * c) {
    for (Eigen::Index i = 0; i < L; ++i) {
      for (Eigen::Index j = 0; j < L; ++j) {
        if (i != j && M.block(i * r, j * c, r, c).cwiseAbs().maxCoeff() != 0.0) {
          throw ConfigError(name + " must be block diagonal (one block per agent)");
        }
      }
      out.push_back(M.block(i * r, i * c, r, c));
    }
    return out;
  }
  throw ConfigError(name + " has shape " + std::to_string(M.rows()) + "x" +
                    std::to_string(M.cols()) + "; expected stacked " + std::to_string(L * r) +
                    "x" + std::to_string(c) + " or block diagonal " + std::to_string(L * r) + "x" +
                    std::to_string(L * c));
}

DecayScope parse_scope(const std::string& text) {
  if (text == "iteration" || text == "per_iteration") {
    return DecayScope::PerIteration;
  }
  if (text == "global") {
    return DecayScope::Global;
  }
  throw ConfigError("noise.decay_scope must be 'iteration' or 'global'");
}

}  // namespace

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    if (!entries.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  if (entries.empty()) {
    throw ConfigError("configuration is empty");
  }
  return entries;
}

ExperimentConfig build_config(const ConfigEntries& entries) {
  Reader r(entries);
  ExperimentConfig config;

  const std::size_t L = r.count("system.agents", 0);
  const std::size_t n = r.count("system.state_dim", 1);
  const std::size_t m = r.count("system.input_dim", 1);
  if (L == 0) {
    throw ConfigError("system.agents must be positive");
  }
  const Matrix A = r.matrix("system.A");
  const auto B = agent_blocks(r.matrix("system.B"), L, n, m, "system.B");
  const auto P = agent_blocks(r.has("system.P") ? r.matrix("system.P") : Matrix::Ones(1, 1), L,
                              n, n, "system.P");
  const auto R = agent_blocks(r.has("system.R") ? r.matrix("system.R") : Matrix::Ones(1, 1), L,
                              m, m, "system.R");
  config.model = SystemModel(L, n, m, A, B, P, R);

  config.topology.W = r.matrix("topology.W");
  if (config.topology.W.rows() != static_cast<Eigen::Index>(L) ||
      config.topology.W.cols() != static_cast<Eigen::Index>(L)) {
    throw ConfigError("topology.W must be " + std::to_string(L) + "x" + std::to_string(L));
  }
  config.topology.communication = r.has("topology.communication")
                                      ? Graph(L, r.edges("topology.communication", L))
                                      : Graph::from_support(config.topology.W);
  if (r.has("topology.interconnection")) {
    if (r.raw("topology.interconnection") == "complete") {
      config.topology.interconnection = Graph::complete(L);
    } else {
      config.topology.interconnection = Graph(L, r.edges("topology.interconnection", L));
    }
  } else {
    std::vector<Graph::Edge> coupled;
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        if (i != j && config.model.A_block(i, j).cwiseAbs().maxCoeff() != 0.0) {
          coupled.emplace_back(i, j);
        }
      }
    }
    config.topology.interconnection = Graph(L, coupled);
  }

  config.noise.a = r.per_agent("noise.a", L, 0.05);
  config.noise.b = r.per_agent("noise.b", L, 0.7);
  config.noise.c = r.number("noise.c", 0.9999);
  config.noise.omega_max = r.count("noise.omega_max", 15);
  config.noise.decay_scope =
      r.has("noise.decay_scope") ? parse_scope(r.raw("noise.decay_scope")) : DecayScope::PerIteration;

  config.learning.N = r.count("learning.N", config.learning.N);
  config.learning.alpha = r.number("learning.alpha", config.learning.alpha);
  config.learning.eps_K = r.number("learning.eps_K", config.learning.eps_K);
  config.learning.q_max = r.count("learning.q_max", config.learning.q_max);
  config.learning.divergence_guard =
      r.number("learning.divergence_guard", config.learning.divergence_guard);
  config.mode = r.has("learning.mode") ? parse_mode(r.raw("learning.mode"))
                                       : ObservationMode::StateTracking;
  config.K1 = r.has("learning.K1") ? GainMatrix(r.matrix("learning.K1"), m)
                                   : GainMatrix::zero(config.model);
  {
    const auto x0 = r.per_agent("learning.x0", L * n, 0.0);
    config.x0 = Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  }

  if (r.has("run.seed")) {
    const std::string& s = r.raw("run.seed");
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("run.seed must be an unsigned integer");
    }
    config.seed = seed;
  }
  config.noise.seed = config.seed;
  if (r.has("run.out_dir")) {
    config.out_dir = r.raw("run.out_dir");
  }

  r.reject_unknown();
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return build_config(parse_config_text(buffer.str()));
}

void validate_config(const ExperimentConfig& config) {
  const auto& model = config.model;
  const auto& topo = config.topology;
  const std::size_t L = model.agents();

  if (topo.communication.nodes() != L || topo.interconnection.nodes() != L) {
    throw ConfigError("graph sizes do not match the agent count");
  }
  if (!respects_interconnection(model, topo.interconnection)) {
    throw ConfigError("A couples agents that are not adjacent in the interconnection graph");
  }
  if (!is_connected(topo.communication)) {
    throw ConfigError("communication graph not connected");
  }
  const auto report = validate_weight_matrix(topo.W, topo.communication);
  if (!report.valid) {
    throw ConfigError(report.reason);
  }
  try {
    (void)solve_dare(model);
  } catch (const NumericalError&) {
    throw ConfigError("(A, B) not stabilizable: Riccati recursion did not converge");
  }
  if (static_cast<std::size_t>(config.K1.stacked().rows()) != model.input_dim() ||
      static_cast<std::size_t>(config.K1.stacked().cols()) != model.state_dim()) {
    throw ConfigError("learning.K1 must be " + std::to_string(model.input_dim()) + "x" +
                      std::to_string(model.state_dim()));
  }
  if (!is_stabilizing(model, config.K1)) {
    throw ConfigError("K1 not stabilizing (spectral radius of A - B K1 is " +
                      std::to_string(spectral_radius(closed_loop(model, config.K1))) + ")");
  }
  if (static_cast<std::size_t>(config.x0.size()) != model.state_dim()) {
    throw ConfigError("learning.x0 must have " + std::to_string(model.state_dim()) + " entries");
  }
  validate_noise_config(config.noise, L);
  if (!(config.learning.alpha > 0.0)) {
    throw ConfigError("learning.alpha must be positive");
  }
  if (config.learning.N == 0) {
    throw ConfigError("learning.N must be positive");
  }
  if (!(config.learning.eps_K > 0.0)) {
    throw ConfigError("learning.eps_K must be positive");
  }
  if (!(config.learning.divergence_guard > 0.0)) {
    throw ConfigError("learning.divergence_guard must be positive");
  }
}

std::string canonical_key(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {
      {"N", "learning.N"},         {"alpha", "learning.alpha"}, {"eps_K", "learning.eps_K"},
      {"q_max", "learning.q_max"}, {"c", "noise.c"},            {"a", "noise.a"},
      {"b", "noise.b"},            {"seed", "run.seed"},        {"mode", "learning.mode"},
  };
  auto it = aliases.find(key);
  return it == aliases.end() ? key : it->second;
}

}  // namespace stq
