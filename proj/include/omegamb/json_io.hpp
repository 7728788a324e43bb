// JSON wire formats for grammars, Buchi pushdown automata and 2-tape Buchi
// automata.
#pragma once

#include <string>

#include <json.hpp>

#include "omegamb/bpda.hpp"
#include "omegamb/cfg.hpp"
#include "omegamb/relations.hpp"

namespace omega {

// {"terminals":["a"],"nonterminals":["S"],"start":"S",
//  "rules":[{"lhs":"S","rhs":["a","S"]},{"lhs":"S","rhs":[]}]}
nlohmann::json cfg_to_json(const Cfg& g);
Cfg cfg_from_json(const nlohmann::json& j);

// {"states":[...],"input_alphabet":[...],"stack_alphabet":[...],
//  "initial_state":"q0","initial_stack":"Z","final_states":[...],
//  "transitions":[{"from":"q0","input":"a"|null,"top":"Z","to":"q1",
//                  "push":["A","Z"]}]}   push front = new top
nlohmann::json bpda_to_json(const Bpda& a);
Bpda bpda_from_json(const nlohmann::json& j);

// {"states":[...],"input_alphabet":[...],"output_alphabet":[...],
//  "initial_state":"q0","final_states":[...],
//  "transitions":[{"from":"q0","input":"ab","output":"","to":"q1"}]}
nlohmann::json tba_to_json(const TwoTapeBa& t);
TwoTapeBa tba_from_json(const nlohmann::json& j);

}  // namespace omega
