#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bdg/prob_tree.hpp"
#include "bdg/report.hpp"
#include "bdg/search.hpp"

namespace bdg {

using json = nlohmann::json;

// Shortest decimal string that round-trips the double (17 significant digits).
std::string format_double(double x);

// --- Martingale file format -------------------------------------------------
// {"version": 1, "tree": {"branch_prob": "1", "value": "0", "children": [...]}}
// Numbers are decimal strings; root first, root branch_prob = 1, value = 0.

json serialize_martingale(const AdaptedProcess& proc);
AdaptedProcess parse_martingale(const json& doc);
AdaptedProcess load_martingale(const std::string& path);
void save_martingale(const AdaptedProcess& proc, const std::string& path);

// --- Report serialization ---------------------------------------------------

json to_json(const CheckReport& r);
json to_json(const SuiteReport& r);
json to_json(const SearchResult& r);
json to_json(const ScanRow& r);

// --- Generator specs --------------------------------------------------------
// "walk:depth=5", "random:depth=5,branch=3,seed=7,scale=1",
// "transform:depth=4,seed=3".  Parameters in the spec override the defaults.

AdaptedProcess make_family(const std::string& spec, int default_depth = 4,
                           int default_branching = 2,
                           std::uint64_t default_seed = 1);

}  // namespace bdg
