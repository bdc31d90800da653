#include "bdg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace bdg {

namespace {

double parse_number(const json& j, const char* what) {
  if (!j.is_string())
    throw std::invalid_argument(std::string(what) +
                                " must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("unparseable number for ") + what +
                                ": '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw std::invalid_argument(std::string("unparseable number for ") + what +
                                ": '" + s + "'");
  return v;
}

struct FlatNode {
  int parent;
  int depth;
  double prob;
  double value;
};

void flatten(const json& node, int parent, int depth,
             std::vector<FlatNode>& out, std::vector<std::vector<int>>& kids) {
  if (!node.is_object())
    throw std::invalid_argument("tree nodes must be JSON objects");
  FlatNode fn;
  fn.parent = parent;
  fn.depth = depth;
  fn.prob = parse_number(node.at("branch_prob"), "branch_prob");
  fn.value = parse_number(node.at("value"), "value");
  const int id = static_cast<int>(out.size());
  out.push_back(fn);
  kids.emplace_back();
  if (parent >= 0) kids[parent].push_back(id);
  const auto it = node.find("children");
  if (it != node.end() && !it->is_null()) {
    if (!it->is_array())
      throw std::invalid_argument("children must be an array");
    for (const json& c : *it) flatten(c, id, depth + 1, out, kids);
  }
}

json node_to_json(const AdaptedProcess& proc, int id) {
  const TreeNode& nd = proc.tree->node(id);
  json j;
  j["branch_prob"] = format_double(nd.branch_prob);
  j["value"] = format_double(proc.values[id]);
  json children = json::array();
  for (int c : nd.children) children.push_back(node_to_json(proc, c));
  j["children"] = std::move(children);
  return j;
}

std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("bad generator parameter: '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json serialize_martingale(const AdaptedProcess& proc) {
  json doc;
  doc["version"] = 1;
  doc["tree"] = node_to_json(proc, 0);
  return doc;
}

AdaptedProcess parse_martingale(const json& doc) {
  if (!doc.is_object() || !doc.contains("version") || !doc.contains("tree"))
    throw std::invalid_argument("martingale file needs 'version' and 'tree'");
  if (doc.at("version").get<int>() != 1)
    throw std::invalid_argument("unsupported martingale file version");

  std::vector<FlatNode> flat;
  std::vector<std::vector<int>> kids;
  flatten(doc.at("tree"), -1, 0, flat, kids);
  if (flat.empty()) throw std::invalid_argument("empty tree");

  // the file nests children depth-first; renumber breadth-first so parsing a
  // generated martingale reproduces its node order exactly
  std::vector<int> order, new_id(flat.size(), -1);
  order.reserve(flat.size());
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (int c : kids[order[head]]) order.push_back(c);
  for (std::size_t i = 0; i < order.size(); ++i)
    new_id[order[i]] = static_cast<int>(i);
  {
    std::vector<FlatNode> f2(flat.size());
    std::vector<std::vector<int>> k2(flat.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      f2[i] = flat[order[i]];
      if (f2[i].parent >= 0) f2[i].parent = new_id[f2[i].parent];
      for (int c : kids[order[i]]) k2[i].push_back(new_id[c]);
    }
    flat = std::move(f2);
    kids = std::move(k2);
  }

  if (flat[0].prob != 1.0)
    throw std::invalid_argument("root branch_prob must be 1");
  if (flat[0].value != 0.0)
    throw std::invalid_argument("root value must be 0");

  std::vector<TreeNode> nodes(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    nodes[i].parent = flat[i].parent;
    nodes[i].depth = flat[i].depth;
    nodes[i].branch_prob = flat[i].prob;
    nodes[i].children = kids[i];
  }
  // accept hand-written files whose probabilities sum to 1 only loosely;
  // exactly round-tripped files stay bit-identical
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].children.empty()) continue;
    double sum = 0.0;
    for (int c : nodes[i].children) sum += nodes[c].branch_prob;
    const double gap = std::abs(sum - 1.0);
    if (gap > 1e-9)
      throw std::invalid_argument(
          "child branch probabilities must sum to 1 within 1e-9");
    if (gap > 1e-12)
      for (int c : nodes[i].children) nodes[c].branch_prob /= sum;
  }

  AdaptedProcess proc;
  proc.tree =
      std::make_shared<const OutcomeTree>(OutcomeTree::build(std::move(nodes)));
  proc.values.resize(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) proc.values[i] = flat[i].value;
  return proc;
}

AdaptedProcess load_martingale(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  json doc;
  in >> doc;  // throws with byte position on malformed JSON
  return parse_martingale(doc);
}

void save_martingale(const AdaptedProcess& proc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << serialize_martingale(proc).dump(2) << "\n";
}

json to_json(const CheckReport& r) {
  json j;
  j["check_id"] = r.check_id;
  j["lhs"] = format_double(r.lhs);
  j["rhs"] = format_double(r.rhs);
  j["margin"] = format_double(r.margin);
  j["tolerance"] = format_double(r.tolerance);
  j["pass"] = r.pass;
  j["status"] = to_string(r.status);
  j["anchor"] = r.anchor;
  return j;
}

json to_json(const SuiteReport& r) {
  json j;
  j["p"] = format_double(r.p);
  j["fingerprint"] = r.fingerprint;
  j["overall_pass"] = r.overall_pass;
  json checks = json::array();
  for (const CheckReport& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = std::move(checks);
  return j;
}

json to_json(const SearchResult& r) {
  json j;
  j["p"] = format_double(r.p);
  j["objective"] =
      r.objective == Direction::Minimize ? "minimize" : "maximize";
  j["best_ratio"] = format_double(r.best_ratio);
  json params = json::array();
  for (double x : r.best_params) params.push_back(format_double(x));
  j["best_params"] = std::move(params);
  json trace;
  trace["evaluations"] = r.trace.evaluations;
  trace["iterations"] = r.trace.iterations;
  trace["restarts_used"] = r.trace.restarts_used;
  json imp = json::array();
  for (double x : r.trace.improvements) imp.push_back(format_double(x));
  trace["improvements"] = std::move(imp);
  j["trace"] = std::move(trace);
  j["certificate"] = serialize_martingale(r.certificate);
  return j;
}

json to_json(const ScanRow& r) {
  json j;
  j["p"] = format_double(r.p);
  j["c_p_pow"] = format_double(r.cp_pow);
  j["observed_min"] = format_double(r.min_ratio);
  j["observed_max"] = format_double(r.max_ratio);
  j["C_p_pow"] = format_double(r.Cp_pow);
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

AdaptedProcess make_family(const std::string& spec, int default_depth,
                           int default_branching, std::uint64_t default_seed) {
  std::string name = spec;
  std::map<std::string, std::string> kv;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    name = spec.substr(0, colon);
    kv = parse_kv(spec.substr(colon + 1));
  }
  auto get_int = [&](const char* key, int fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
  };
  auto get_u64 = [&](const char* key, std::uint64_t fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoull(it->second);
  };
  auto get_dbl = [&](const char* key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
  };

  const int depth = get_int("depth", default_depth);
  if (name == "walk") return gen_symmetric_walk(depth);
  if (name == "random")
    return gen_random_martingale(depth, get_int("branch", default_branching),
                                 get_u64("seed", default_seed),
                                 get_dbl("scale", 1.0));
  if (name == "transform") {
    // symmetric walk with random predictable +-1 multipliers
    AdaptedProcess walk = gen_symmetric_walk(depth);
    std::vector<double> mult(walk.tree->node_count(), 1.0);
    std::mt19937_64 rng(get_u64("seed", default_seed));
    for (int i = 0; i < walk.tree->node_count(); ++i) {
      const TreeNode& nd = walk.tree->node(i);
      if (nd.children.empty()) continue;
      const double m = (rng() & 1u) ? 1.0 : -1.0;
      for (int c : nd.children) mult[c] = m;
    }
    return gen_transform(walk, mult, 1.0);
  }
  throw std::invalid_argument("unknown generator family: '" + name + "'");
}

}  // namespace bdg
