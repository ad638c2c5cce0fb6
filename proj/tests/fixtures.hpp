#pragma once

#include <vector>

#include "rdts/inference.hpp"
#include "rdts/model.hpp"

namespace fixtures {

using Rows = std::vector<std::vector<double>>;

inline rdts::BanditInstance make(const Rows & actions, const Rows & params,
                                 rdts::OutcomeModel model = rdts::OutcomeModel::linear_binary()) {
    return rdts::BanditInstance(rdts::ActionSet(actions), rdts::ParameterSet(params), model);
}

inline std::vector<double> probs(const rdts::BeliefState & b) {
    return {b.probs().begin(), b.probs().end()};
}

}  // namespace fixtures
