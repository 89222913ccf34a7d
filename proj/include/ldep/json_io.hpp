#pragma once

#include <string>

#include <json.hpp>

#include "ldep/frontend.hpp"
#include "ldep/multi_lde.hpp"
#include "ldep/nested.hpp"
#include "ldep/partition.hpp"
#include "ldep/scheduler.hpp"

namespace ldep {

using nlohmann::json;

/// Nest description: {loops:[{var,lo,hi}], arrays:[{name,dims}],
/// accesses:[{array, kind:"read"|"write", subscripts:[{coeff,var,const}]}]}.
inline LoopNest nest_from_json(const json& j) {
  LoopNest nest;
  std::map<std::string, int> var_index;
  for (const auto& jl : j.at("loops")) {
    std::string var = jl.at("var").get<std::string>();
    int64_t lo = jl.at("lo").get<int64_t>();
    int64_t hi = jl.at("hi").get<int64_t>();
    if (lo > hi) throw SyntaxError("loop '" + var + "' has lo > hi", 0, 0);
    var_index[var] = static_cast<int>(nest.loops.size());
    nest.loops.push_back(Loop{var, IterRange(lo, hi)});
  }
  std::map<std::string, int> array_index;
  for (const auto& ja : j.at("arrays")) {
    std::string name = ja.at("name").get<std::string>();
    array_index[name] = static_cast<int>(nest.arrays.size());
    nest.arrays.push_back(ArrayDecl{name, ja.at("dims").get<int>()});
  }
  int stmt = 0;
  for (const auto& jacc : j.at("accesses")) {
    ArrayAccess acc;
    std::string array = jacc.at("array").get<std::string>();
    auto ai = array_index.find(array);
    if (ai == array_index.end()) throw SyntaxError("unknown array '" + array + "'", 0, 0);
    acc.array = ai->second;
    std::string kind = jacc.at("kind").get<std::string>();
    if (kind != "read" && kind != "write")
      throw SyntaxError("access kind must be read or write", 0, 0);
    acc.is_write = (kind == "write");
    acc.stmt = stmt++;
    for (const auto& js : jacc.at("subscripts")) {
      AffineExpr e;
      e.constant = js.value("const", int64_t{0});
      if (js.contains("var")) {
        std::string var = js.at("var").get<std::string>();
        auto vi = var_index.find(var);
        if (vi == var_index.end())
          throw SyntaxError("unknown loop variable '" + var + "'", 0, 0);
        int64_t coeff = js.value("coeff", int64_t{1});
        if (coeff != 0) e.terms.push_back({coeff, vi->second});
      }
      acc.subscripts.push_back(std::move(e));
    }
    if (static_cast<int>(acc.subscripts.size()) != nest.arrays[static_cast<size_t>(acc.array)].dims)
      throw SyntaxError("access to '" + array + "' has wrong subscript count", 0, 0);
    nest.accesses.push_back(std::move(acc));
  }
  return nest;
}

inline json partition_to_json(const IterPartition& part) {
  json j;
  j["range"] = {{"lo", part.range.lo}, {"hi", part.range.hi}};
  j["components"] = part.components;
  j["seeds"] = seeds_of(part).seeds;
  json cls = json::array();
  for (CcClass c : part.classes) {
    switch (c) {
      case CcClass::IndependentSingleton: cls.push_back("independent"); break;
      case CcClass::SelfDepSingleton: cls.push_back("self_dependent"); break;
      case CcClass::NonSingleton: cls.push_back("non_singleton"); break;
    }
  }
  j["classification"] = std::move(cls);
  return j;
}

inline json thread_plan_to_json(const ThreadPlan& plan, const IterPartition& part) {
  json threads = json::array();
  for (size_t t = 0; t < plan.thread_ccs.size(); ++t) {
    json ccs = json::array();
    for (size_t cc : plan.thread_ccs[t]) ccs.push_back(part.components[cc]);
    threads.push_back({{"id", t}, {"ccs", std::move(ccs)}});
  }
  return json{{"threads", std::move(threads)}, {"makespan", plan.makespan}};
}

inline json seeds_to_json(const SeedClassification& sc) {
  return json{{"common_seeds", sc.common_seeds},
              {"unique_common_seeds", sc.unique_common_seeds},
              {"unique_seeds", sc.unique_seeds}};
}

inline json schedule_tree_to_json(const ScheduleTree& tree,
                                  const std::vector<std::string>& loop_vars) {
  json levels = json::array();
  for (const ScheduleLevel& l : tree.levels) {
    const char* kind = l.kind == LevelKind::Sequential
                           ? "sequential"
                           : (l.kind == LevelKind::ParallelComponents ? "parallel_components"
                                                                      : "parallel_values");
    json jl{{"loop", loop_vars[static_cast<size_t>(l.loop)]}, {"kind", kind},
            {"groups", l.groups}};
    if (!l.seeds.empty()) jl["seeds"] = l.seeds;
    levels.push_back(std::move(jl));
  }
  return json{{"levels", std::move(levels)},
              {"body_fully_parallel", tree.body_fully_parallel}};
}

inline json bounds_to_json(const Bounds& b) {
  return json{{"range_size", b.r},          {"beta", b.beta},
              {"est_len2_count", b.est_len2_count}, {"est_singletons", b.est_singletons},
              {"p_max", b.p_max},           {"l_max", b.l_max},
              {"n_max", b.n_max}};
}

}  // namespace ldep
