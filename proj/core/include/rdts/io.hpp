#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rdts/audit.hpp"
#include "rdts/inference.hpp"
#include "rdts/model.hpp"
#include "rdts/partition.hpp"
#include "rdts/policy.hpp"

namespace rdts {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// {"d": .., "actions": [[..]], "params": [[..]],
///  "model": {"kind": "linear"|"logistic"|"glm", "beta"?, "eta"?, "link"?}}
std::string instance_to_json(const BanditInstance & instance);
BanditInstance instance_from_json(std::string_view text);

std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// {"epsilon": .., "cells": [..]}
std::string partition_to_json(const Partition & partition);
Partition partition_from_json(std::string_view text);

/// Partition fields plus "representatives": [[idx1, idx2, r], ..] and "cell_mass".
std::string representation_to_json(const Representation & representation);
Representation representation_from_json(std::string_view text);

/// One {"param", "action", "outcome"} object per line.
std::string history_to_jsonl(const History & history);
History history_from_jsonl(std::string_view text);

/// Header "period,mean_regret,cum_regret,std_err".
std::string regret_trace_to_csv(const RegretTrace & trace);

std::string audit_to_csv(const AuditReport & report);
std::string audit_to_json(const AuditReport & report);

}  // namespace rdts
