#include "paracon/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

#include "json.hpp"
#include "paracon/generators.hpp"

namespace paracon {

using nlohmann::json;

namespace {

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const noexcept { return j_; }
  const std::string& path() const noexcept { return path_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(path_, msg); }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, _] : j_.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        throw ScenarioError(child_path(key), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) throw ScenarioError(child_path(key), "missing required field");
    return Node(j_.at(key), child_path(key));
  }

  std::vector<Node> items() const {
    if (!j_.is_array()) fail("expected a list");
    std::vector<Node> out;
    for (std::size_t k = 0; k < j_.size(); ++k) out.emplace_back(j_[k], path_ + "[" + std::to_string(k) + "]");
    return out;
  }

  double number() const {
    if (j_.is_number()) {
      const double v = j_.get<double>();
      if (!std::isfinite(v)) fail("expected a finite number");
      return v;
    }
    if (j_.is_string()) {
      try {
        return parse_weight(j_.get<std::string>());
      } catch (const InvalidInput& e) {
        fail(e.what());
      }
    }
    fail("expected a number");
  }

  std::uint64_t count() const {
    if (!j_.is_number_integer() || j_.get<long long>() < 0) fail("expected a nonnegative integer");
    return j_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  Vec vec() const {
    const auto xs = items();
    if (xs.empty()) fail("expected a nonempty list of numbers");
    Vec v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) v[static_cast<Eigen::Index>(k)] = xs[k].number();
    return v;
  }

  Mat mat() const {
    const auto rows = items();
    if (rows.empty()) fail("expected a nonempty list of rows");
    std::vector<Vec> vs;
    for (const auto& r : rows) vs.push_back(r.vec());
    Mat M(static_cast<Eigen::Index>(vs.size()), vs.front().size());
    for (std::size_t r = 0; r < vs.size(); ++r) {
      if (vs[r].size() != M.cols()) rows[r].fail("row length differs from the first row");
      M.row(static_cast<Eigen::Index>(r)) = vs[r].transpose();
    }
    return M;
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

// Library constructors throw InvalidInput without a location; attach one.
template <class F>
auto located(const Node& node, F&& build) {
  try {
    return build();
  } catch (const ScenarioError&) {
    throw;
  } catch (const InvalidInput& e) {
    node.fail(e.what());
  } catch (const PreconditionError& e) {
    node.fail(e.what());
  }
}

ConvexSet parse_set(const Node& n) {
  const std::string kind = n.at("kind").string();
  if (kind == "halfspace") {
    n.require_object({"kind", "a", "c"});
    return located(n, [&] { return ConvexSet::halfspace(n.at("a").vec(), n.at("c").number()); });
  }
  if (kind == "ball") {
    n.require_object({"kind", "center", "radius"});
    return located(n, [&] { return ConvexSet::ball(n.at("center").vec(), n.at("radius").number()); });
  }
  if (kind == "box") {
    n.require_object({"kind", "lo", "hi"});
    return located(n, [&] { return ConvexSet::box(n.at("lo").vec(), n.at("hi").vec()); });
  }
  if (kind == "affine") {
    n.require_object({"kind", "A", "b"});
    return located(n, [&] { return ConvexSet::affine_subspace(n.at("A").mat(), n.at("b").vec()); });
  }
  if (kind == "intersection") {
    n.require_object({"kind", "parts"});
    std::vector<ConvexSet> parts;
    for (const auto& p : n.at("parts").items()) parts.push_back(parse_set(p));
    return located(n, [&] { return ConvexSet::intersection(std::move(parts)); });
  }
  n.at("kind").fail("unknown set kind '" + kind + "'");
}

QuadraticObjective parse_quadratic(const Node& n) { return {n.at("Q").mat(), n.at("c").vec()}; }

ParaMap parse_map(const Node& n) {
  const std::string kind = n.at("kind").string();
  if (kind == "affine_solve") {
    n.require_object({"kind", "A", "b"});
    return located(n, [&] { return ParaMap::affine_linear_solve(n.at("A").mat(), n.at("b").vec()); });
  }
  if (kind == "projector") {
    n.require_object({"kind", "set"});
    return located(n, [&] { return ParaMap::projector(parse_set(n.at("set"))); });
  }
  if (kind == "gradient_descent") {
    n.require_object({"kind", "Q", "c", "step", "lipschitz"});
    return located(n, [&] {
      return ParaMap::gradient_descent(parse_quadratic(n), n.at("step").number(), n.at("lipschitz").number());
    });
  }
  if (kind == "proximal") {
    n.require_object({"kind", "function"});
    const Node f = n.at("function");
    const std::string fk = f.at("kind").string();
    if (fk == "indicator") {
      f.require_object({"kind", "set"});
      return located(f, [&] { return ParaMap::proximal(ProxFunction::indicator(parse_set(f.at("set")))); });
    }
    if (fk == "quadratic") {
      f.require_object({"kind", "Q", "c"});
      return located(f, [&] { return ParaMap::proximal(ProxFunction::quadratic(parse_quadratic(f))); });
    }
    if (fk == "weighted_l1") {
      f.require_object({"kind", "dimension", "weight"});
      return located(f, [&] {
        return ParaMap::proximal(ProxFunction::weighted_l1(f.at("dimension").count(), f.at("weight").number()));
      });
    }
    f.at("kind").fail("unknown function kind '" + fk + "'");
  }
  if (kind == "averaged") {
    n.require_object({"kind", "alpha", "inner"});
    const Node in = n.at("inner");
    const std::string ik = in.at("kind").string();
    const NonexpansiveMap inner = [&] {
      if (ik == "identity") {
        in.require_object({"kind", "dimension"});
        return located(in, [&] { return NonexpansiveMap::identity(in.at("dimension").count()); });
      }
      if (ik == "reflection") {
        in.require_object({"kind", "set"});
        return located(in, [&] { return NonexpansiveMap::reflection(parse_set(in.at("set"))); });
      }
      if (ik == "linear") {
        in.require_object({"kind", "Q"});
        return located(in, [&] { return NonexpansiveMap::linear(in.at("Q").mat()); });
      }
      in.at("kind").fail("unknown nonexpansive kind '" + ik + "'");
    }();
    return located(n, [&] { return ParaMap::averaged(inner, n.at("alpha").number()); });
  }
  if (kind == "composite") {
    n.require_object({"kind", "maps", "witness"});
    std::vector<ParaMap> parts;
    for (const auto& p : n.at("maps").items()) parts.push_back(parse_map(p));
    return located(n, [&] { return compose(std::move(parts), n.at("witness").vec()); });
  }
  if (kind == "linear") {
    n.require_object({"kind", "P"});
    return located(n, [&] { return ParaMap::linear(n.at("P").mat()); });
  }
  n.at("kind").fail("unknown map kind '" + kind + "'");
}

DirectedGraph parse_graph(const Node& n, std::size_t m) {
  n.require_object({"arcs", "complete"});
  if (n.has("complete")) {
    if (n.has("arcs")) n.fail("give either arcs or complete, not both");
    if (!n.at("complete").boolean()) n.at("complete").fail("must be true when present");
    return DirectedGraph::complete(m);
  }
  std::vector<Arc> arcs;
  for (const auto& a : n.at("arcs").items()) {
    const auto ends = a.items();
    if (ends.size() != 2) a.fail("an arc is a pair [j, i]");
    const auto j = ends[0].count(), i = ends[1].count();
    if (j < 1 || j > m || i < 1 || i > m) a.fail("vertex out of range 1.." + std::to_string(m));
    arcs.push_back({static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)});
  }
  return DirectedGraph::from_arcs(m, arcs, true);
}

GraphSchedule parse_schedule(const Node& n, std::size_t m, std::uint64_t default_seed) {
  n.require_object({"kind", "graphs", "horizon", "seed"});
  const std::string kind = n.at("kind").string();
  std::vector<DirectedGraph> graphs;
  for (const auto& g : n.at("graphs").items()) graphs.push_back(parse_graph(g, m));
  if (graphs.empty()) n.at("graphs").fail("at least one graph required");
  std::optional<std::size_t> horizon;
  if (n.has("horizon")) horizon = n.at("horizon").count();
  if (kind == "constant") {
    if (graphs.size() != 1) n.at("graphs").fail("a constant schedule takes exactly one graph");
    if (n.has("seed")) n.at("seed").fail("not used by a constant schedule");
    return GraphSchedule::constant(std::move(graphs.front()));
  }
  if (kind == "periodic") {
    if (n.has("seed")) n.at("seed").fail("not used by a periodic schedule");
    return GraphSchedule::periodic(std::move(graphs), horizon);
  }
  if (kind == "seeded_random") {
    if (!horizon) n.fail("a seeded_random schedule needs a horizon");
    const std::uint64_t seed = n.has("seed") ? n.at("seed").count() : default_seed;
    return GraphSchedule::seeded_random(std::move(graphs), seed, *horizon);
  }
  n.at("kind").fail("unknown schedule kind '" + kind + "'");
}

}  // namespace

double parse_weight(const std::string& text) {
  const auto parse_int = [&](std::string_view s, long long& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
  };
  const std::string_view sv(text);
  const auto slash = sv.find('/');
  if (slash != std::string_view::npos) {
    long long a = 0, b = 0;
    if (!parse_int(sv.substr(0, slash), a) || !parse_int(sv.substr(slash + 1), b))
      throw InvalidInput("malformed fraction '" + text + "'");
    if (b <= 0) throw InvalidInput("fraction '" + text + "' needs a positive denominator");
    return static_cast<double>(a) / static_cast<double>(b);
  }
  double v = 0.0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc() || res.ptr != sv.data() + sv.size() || !std::isfinite(v))
    throw InvalidInput("malformed number '" + text + "'");
  return v;
}

ScenarioFile parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("", "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                                ": " + e.what());
  }

  const Node root(doc, "");
  root.require_object({"agents", "graph_schedule", "weights", "norm", "init", "run", "witness", "verify"});

  ScenarioFile file;
  Scenario& sc = file.scenario;

  if (root.has("run")) {
    const Node r = root.at("run");
    r.require_object({"T", "eps_consensus", "eps_residual", "seed"});
    if (r.has("T")) sc.horizon = r.at("T").count();
    if (r.has("eps_consensus")) sc.eps_consensus = r.at("eps_consensus").number();
    if (r.has("eps_residual")) sc.eps_residual = r.at("eps_residual").number();
    if (r.has("seed")) file.seed = r.at("seed").count();
    if (!(sc.eps_consensus > 0.0)) r.at("eps_consensus").fail("must be positive");
    if (!(sc.eps_residual > 0.0)) r.at("eps_residual").fail("must be positive");
  }

  const Node agents = root.at("agents");
  for (const auto& a : agents.items()) sc.maps.push_back(parse_map(a));
  if (sc.maps.empty()) agents.fail("at least one agent required");
  const std::size_t m = sc.maps.size();
  const std::size_t n = sc.maps.front().dimension();
  for (std::size_t i = 0; i < m; ++i)
    if (sc.maps[i].dimension() != n)
      throw ScenarioError(agents.path() + "[" + std::to_string(i) + "]",
                          "dimension " + std::to_string(sc.maps[i].dimension()) + " differs from agent 1 (" +
                              std::to_string(n) + ")");

  sc.schedule = parse_schedule(root.at("graph_schedule"), m, file.seed);
  if (sc.schedule.horizon() && *sc.schedule.horizon() < sc.horizon)
    root.at("graph_schedule").at("horizon").fail("shorter than run.T (" + std::to_string(sc.horizon) + ")");

  if (root.has("weights")) {
    const Node w = root.at("weights");
    const auto mats = w.items();
    if (mats.size() != sc.schedule.pool().size())
      w.fail("need one matrix per schedule graph (" + std::to_string(sc.schedule.pool().size()) + ")");
    std::vector<Mat> weights;
    for (std::size_t k = 0; k < mats.size(); ++k) {
      Mat W = mats[k].mat();
      if (static_cast<std::size_t>(W.rows()) != m || static_cast<std::size_t>(W.cols()) != m)
        mats[k].fail("expected a " + std::to_string(m) + " x " + std::to_string(m) + " matrix");
      located(mats[k], [&] { return stochastic_from_weights(sc.schedule.pool()[k], W); });
      weights.push_back(std::move(W));
    }
    sc.weights = std::move(weights);
  }

  if (root.has("norm")) {
    const Node p = root.at("norm");
    p.require_object({"p"});
    sc.norm = located(p.at("p"), [&] { return NormIndex::finite(p.at("p").number()); });
  }

  const Node init = root.at("init");
  init.require_object({"x0", "random"});
  if (init.has("x0") == init.has("random")) init.fail("give exactly one of x0 or random");
  if (init.has("x0")) {
    const Node x0 = init.at("x0");
    const Mat X = x0.mat();
    if (static_cast<std::size_t>(X.rows()) != m || static_cast<std::size_t>(X.cols()) != n)
      x0.fail("expected " + std::to_string(m) + " rows of length " + std::to_string(n));
    std::vector<Vec> blocks;
    for (Eigen::Index i = 0; i < X.rows(); ++i) blocks.emplace_back(X.row(i).transpose());
    sc.x0 = StackedVector::from_blocks(blocks);
  } else {
    const Node r = init.at("random");
    r.require_object({"radius", "seed"});
    const double radius = r.has("radius") ? r.at("radius").number() : kDefaultSampleRadius;
    if (!(radius > 0.0)) r.at("radius").fail("must be positive");
    gen::Rng rng(r.has("seed") ? r.at("seed").count() : file.seed);
    const Vec flat = sample_ball(Vec::Zero(static_cast<Eigen::Index>(m * n)), radius, 1, rng).front();
    sc.x0 = StackedVector(m, n, flat);
  }

  if (root.has("witness")) {
    const Node w = root.at("witness");
    Vec y = w.vec();
    if (static_cast<std::size_t>(y.size()) != n) w.fail("expected dimension " + std::to_string(n));
    for (std::size_t i = 0; i < m; ++i)
      if (!is_fixed_point(sc.maps[i], y)) w.fail("not fixed by agent " + std::to_string(i + 1));
    sc.witness = std::move(y);
  }

  if (root.has("verify"))
    for (const auto& v : root.at("verify").items()) file.verify.push_back(v.string());

  located(root, [&] {
    sc.validate();
    return 0;
  });
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace paracon
