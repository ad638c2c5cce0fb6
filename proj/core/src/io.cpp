#include "rdts/io.hpp"

#include <charconv>
#include <cmath>
#include <span>
#include <sstream>

#include "json.hpp"

#include "rdts/error.hpp"

namespace rdts {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception & e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

template <typename T>
T field(const json & j, const char * key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception & e) {
        throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
    }
}

// nlohmann prints doubles with %.17g; shortest round-trip keeps files stable
// and readable, so numbers are emitted by hand.
void write_number_array(std::ostringstream & out, std::span<const double> values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double(values[i]);
    }
    out << ']';
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LinearBinary: return "linear";
        case ModelKind::Logistic: return "logistic";
        case ModelKind::Glm: return "glm";
    }
    return "linear";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "linear") return ModelKind::LinearBinary;
    if (name == "logistic") return ModelKind::Logistic;
    if (name == "glm") return ModelKind::Glm;
    throw Error(ErrorCode::UnsupportedModel, "unknown model kind '" + std::string(name) + "'");
}

std::string instance_to_json(const BanditInstance & instance) {
    std::ostringstream out;
    const std::size_t d = instance.dim();
    out << "{\"d\":" << d << ",\"actions\":[";
    for (std::size_t j = 0; j < instance.num_actions(); ++j) {
        if (j) out << ',';
        write_number_array(out, instance.actions()[j]);
    }
    out << "],\"params\":[";
    for (std::size_t i = 0; i < instance.num_params(); ++i) {
        if (i) out << ',';
        write_number_array(out, instance.params()[i]);
    }
    const auto & model = instance.model();
    out << "],\"model\":{\"kind\":\"" << model_kind_name(model.kind()) << '"';
    if (model.kind() == ModelKind::Logistic) out << ",\"beta\":" << format_double(model.beta());
    if (model.kind() == ModelKind::Glm) {
        out << ",\"link\":\"" << (model.link().kind == LinkKind::Probit ? "probit" : "logistic")
            << "\",\"beta\":" << format_double(model.link().slope)
            << ",\"eta\":" << format_double(model.eta());
    }
    out << "}}";
    return out.str();
}

BanditInstance instance_from_json(std::string_view text) {
    const json j = parse(text);
    const auto d = field<std::size_t>(j, "d");
    auto actions = field<std::vector<std::vector<double>>>(j, "actions");
    auto params = field<std::vector<std::vector<double>>>(j, "params");
    for (const auto * rows : {&actions, &params})
        for (const auto & row : *rows)
            if (row.size() != d) throw Error(ErrorCode::ParseError, "vector length differs from d");
    const json & mj = j.contains("model") ? j.at("model") : json::object();
    const auto kind = parse_model_kind(mj.value("kind", std::string("linear")));
    OutcomeModel model = OutcomeModel::linear_binary();
    if (kind == ModelKind::Logistic) {
        model = OutcomeModel::logistic(field<double>(mj, "beta"));
    } else if (kind == ModelKind::Glm) {
        const auto link_name = mj.value("link", std::string("logistic"));
        Link link;
        if (link_name == "probit")
            link.kind = LinkKind::Probit;
        else if (link_name != "logistic")
            throw Error(ErrorCode::UnsupportedModel, "unknown link '" + link_name + "'");
        link.slope = mj.value("beta", 1.0);
        model = OutcomeModel::glm(link, mj.value("eta", 0.0));
    }
    return BanditInstance(ActionSet(actions), ParameterSet(params), model);
}

std::string partition_to_json(const Partition & partition) {
    std::ostringstream out;
    out << "{\"epsilon\":" << format_double(partition.epsilon()) << ",\"cells\":[";
    for (std::size_t i = 0; i < partition.size(); ++i) out << (i ? "," : "") << partition.cell_of(i);
    out << "]}";
    return out.str();
}

Partition partition_from_json(std::string_view text) {
    const json j = parse(text);
    return Partition(field<std::vector<std::size_t>>(j, "cells"), field<double>(j, "epsilon"));
}

std::string representation_to_json(const Representation & representation) {
    std::string base = partition_to_json(representation.partition);
    base.pop_back();
    std::ostringstream out;
    out << base << ",\"representatives\":[";
    for (std::size_t k = 0; k < representation.cells.size(); ++k) {
        const auto & c = representation.cells[k];
        out << (k ? "," : "") << '[' << c.idx1 << ',' << c.idx2 << ',' << format_double(c.r) << ']';
    }
    out << "],\"cell_mass\":";
    write_number_array(out, representation.cell_mass);
    out << '}';
    return out.str();
}

Representation representation_from_json(std::string_view text) {
    const json j = parse(text);
    Representation rep{Partition(field<std::vector<std::size_t>>(j, "cells"),
                                 field<double>(j, "epsilon")),
                       {},
                       field<std::vector<double>>(j, "cell_mass")};
    for (const auto & t : field<json>(j, "representatives")) {
        if (!t.is_array() || t.size() != 3)
            throw Error(ErrorCode::ParseError, "representative must be [idx1, idx2, r]");
        rep.cells.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<double>()});
    }
    if (rep.cells.size() != rep.partition.num_cells() ||
        rep.cell_mass.size() != rep.partition.num_cells())
        throw Error(ErrorCode::ParseError, "representation has the wrong number of cells");
    return rep;
}

std::string history_to_jsonl(const History & history) {
    std::ostringstream out;
    for (const auto & s : history.steps)
        out << "{\"param\":" << s.param << ",\"action\":" << s.action
            << ",\"outcome\":" << format_double(s.outcome) << "}\n";
    return out.str();
}

History history_from_jsonl(std::string_view text) {
    History h;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const json j = parse(line);
        h.steps.push_back({field<std::size_t>(j, "param"), field<std::size_t>(j, "action"),
                           field<double>(j, "outcome")});
    }
    return h;
}

std::string regret_trace_to_csv(const RegretTrace & trace) {
    std::ostringstream out;
    out << "period,mean_regret,cum_regret,std_err\n";
    for (std::size_t t = 0; t < trace.per_period_regret.size(); ++t)
        out << t + 1 << ',' << format_double(trace.per_period_regret[t]) << ','
            << format_double(trace.cumulative_regret[t]) << ','
            << format_double(trace.std_error[t]) << '\n';
    return out.str();
}

std::string audit_to_csv(const AuditReport & report) {
    std::ostringstream out;
    out << "period,regret,compressed_regret,gamma,info_rep_nats,info_psi_rep_nats,"
           "info_psi_nats,info_psi_history_nats,cum_regret,bound,states,"
           "step1,step2,step3,step4,step5,step6,passed\n";
    for (const auto & r : report.rows) {
        out << r.period << ',' << format_double(r.regret) << ','
            << format_double(r.compressed_regret) << ',' << format_double(r.gamma) << ','
            << format_double(r.info_rep) << ',' << format_double(r.info_psi_rep) << ','
            << format_double(r.info_psi) << ',' << format_double(r.info_psi_history) << ','
            << format_double(r.cumulative_regret) << ',' << format_double(r.bound) << ','
            << r.states;
        for (double v : r.step_violation) out << ',' << format_double(v);
        out << ',' << (r.passed ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string audit_to_json(const AuditReport & report) {
    std::ostringstream out;
    out << "{\"epsilon\":" << format_double(report.epsilon)
        << ",\"gamma_bar\":" << format_double(report.gamma_bar)
        << ",\"I_theta_psi_nats\":" << format_double(report.info_theta_psi)
        << ",\"exact_regret\":" << format_double(report.exact_regret)
        << ",\"simulated_regret\":" << format_double(report.simulated_regret)
        << ",\"simulated_std_err\":" << format_double(report.simulated_std_error)
        << ",\"bound\":" << format_double(report.bound)
        << ",\"passed\":" << (report.passed ? "true" : "false") << ",\"rows\":[";
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const auto & r = report.rows[k];
        out << (k ? "," : "") << "{\"period\":" << r.period
            << ",\"regret\":" << format_double(r.regret)
            << ",\"compressed_regret\":" << format_double(r.compressed_regret)
            << ",\"gamma\":" << format_double(r.gamma)
            << ",\"info_psi_nats\":" << format_double(r.info_psi)
            << ",\"cum_regret\":" << format_double(r.cumulative_regret)
            << ",\"bound\":" << format_double(r.bound) << ",\"step_violation\":";
        write_number_array(out, r.step_violation);
        out << ",\"passed\":" << (r.passed ? "true" : "false") << '}';
    }
    out << "]}";
    return out.str();
}

}  // namespace rdts
