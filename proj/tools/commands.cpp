#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "rdts/audit.hpp"
#include "rdts/bounds.hpp"
#include "rdts/compression.hpp"
#include "rdts/error.hpp"
#include "rdts/information.hpp"
#include "rdts/io.hpp"
#include "rdts/policy.hpp"

namespace rdts::cli {

using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    std::size_t threads = 1;
    std::string config;
};

std::size_t resolve_threads(std::size_t requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void add_common(CLI::App & sub, Common & common) {
    sub.add_option("--seed", common.seed, "Root RNG seed");
    sub.add_option("--out", common.out, "Output path (default stdout)");
    sub.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--threads", common.threads, "Worker threads, 0 = all cores");
    sub.add_option("--config", common.config, "JSON file of flag values; flags override it");
}

void add_model(CLI::App & sub, ModelOptions & model) {
    sub.add_option("--model", model.kind, "linear, logistic or glm")
        ->check(CLI::IsMember({"linear", "logistic", "glm"}));
    sub.add_option("--beta", model.beta, "Logistic / link slope");
    sub.add_option("--link", model.link, "GLM link")->check(CLI::IsMember({"logistic", "probit"}));
    sub.add_option("--eta", model.eta, "GLM noise half-width");
}

void emit(const Common & common, const std::string & text, std::ostream & out) {
    if (common.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + common.out);
    file << text;
}

std::string read_file(const std::string & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void error_line(std::ostream & err, const std::string & code, const std::string & message) {
    err << json{{"error", code}, {"message", message}}.dump() << '\n';
}

std::string json_scalar(const json & v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

// Config values become flags placed right after the subcommand, so anything
// given on the command line comes later and wins.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    json cfg;
    try {
        cfg = json::parse(read_file(path));
    } catch (const json::exception & e) {
        throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");

    std::vector<std::string> extra;
    for (const auto & [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto & v : value) joined += (joined.empty() ? "" : ",") + json_scalar(v);
            extra.push_back(flag);
            extra.push_back(joined);
        } else if (value.is_null() || value.is_object()) {
            throw Error(ErrorCode::ParseError, "config value for '" + key + "' must be a scalar or list");
        } else {
            extra.push_back(flag);
            extra.push_back(json_scalar(value));
        }
    }
    auto at = std::find_if(args.begin(), args.end(),
                           [](const std::string & a) { return a.empty() || a[0] != '-'; });
    if (at != args.end()) ++at;
    args.insert(at, extra.begin(), extra.end());
    return args;
}

BanditInstance load_or_sample(const std::string & instance_path, const Common & common,
                              std::size_t d, std::size_t n, std::size_t m,
                              const OutcomeModel & model, double margin = 0.0) {
    if (!instance_path.empty()) return instance_from_json(read_file(instance_path));
    auto rng = make_stream(common.seed, 0, 0);
    if (margin > 0.0) return sample_instance_with_margin(rng, d, n, m, model, margin);
    return sample_instance(rng, d, n, m, model);
}

struct BuiltPartition {
    Partition partition;
    std::string builder;
    double formula_bound = 0.0;
};

BuiltPartition make_partition(const BanditInstance & instance, std::string builder, double epsilon,
                              double delta) {
    const auto kind = instance.model().kind();
    if (builder == "auto") {
        if (kind == ModelKind::LinearBinary)
            builder = "linear";
        else if (kind == ModelKind::Logistic && delta > 0.0)
            builder = "layered";
        else
            builder = "glm";
    }
    PartitionCountInputs in;
    in.d = static_cast<double>(instance.dim());
    in.epsilon = epsilon;
    if (builder == "linear") {
        auto p = build_partition_linear(instance, epsilon);
        return {std::move(p), builder, partition_count_bound(in)};
    }
    if (builder == "glm") {
        const auto [lo, hi] = instance.inner_range();
        if (kind == ModelKind::LinearBinary)
            throw Error(ErrorCode::UnsupportedModel, "glm builder needs a glm or logistic model");
        in.kind = PartitionBoundKind::Glm;
        in.c_phi = c_phi(instance.model(), lo, hi);
        auto p = build_partition_glm(instance, epsilon);
        return {std::move(p), builder, partition_count_bound(in)};
    }
    if (kind != ModelKind::Logistic)
        throw Error(ErrorCode::UnsupportedModel, "layered builder needs a logistic model");
    in.kind = PartitionBoundKind::Logistic;
    in.beta = instance.model().beta();
    in.delta = delta;
    auto p = build_partition_logistic(instance, epsilon, delta);
    return {std::move(p), builder, partition_count_bound(in)};
}

std::string svg_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string & text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            const auto dash = item.find('-');
            std::size_t used = 0;
            if (dash == std::string::npos) {
                out.push_back(std::stoul(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } else {
                const auto lo = std::stoul(item.substr(0, dash));
                const auto hi = std::stoul(item.substr(dash + 1));
                if (hi < lo) throw std::invalid_argument(item);
                for (auto v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::logic_error &) {
            throw Error(ErrorCode::ParseError, "bad integer list '" + text + "'");
        }
    }
    return out;
}

std::vector<double> parse_real_list(const std::string & text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error &) {
            throw Error(ErrorCode::ParseError, "bad number list '" + text + "'");
        }
    }
    return out;
}

OutcomeModel make_model(const ModelOptions & options) {
    switch (parse_model_kind(options.kind)) {
        case ModelKind::LinearBinary: return OutcomeModel::linear_binary();
        case ModelKind::Logistic: return OutcomeModel::logistic(options.beta);
        case ModelKind::Glm: {
            Link link{options.link == "probit" ? LinkKind::Probit : LinkKind::Logistic, options.beta};
            return OutcomeModel::glm(link, options.eta);
        }
    }
    return OutcomeModel::linear_binary();
}

std::vector<SweepRow> ir_sweep(const SweepConfig & config) {
    const bool linear = config.model == "linear";
    if (!linear && config.model != "logistic")
        throw Error(ErrorCode::UnsupportedModel, "ir-sweep supports linear and logistic models");
    const std::vector<double> betas = linear ? std::vector<double>{0.0} : config.betas;
    for (double b : betas)
        if (!linear && !(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
    for (auto d : config.dims)
        if (d == 0) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
    if (config.n == 0 || config.m == 0) throw Error(ErrorCode::InvalidArgument, "n and m must be >= 1");

    std::vector<std::size_t> dims = config.dims;
    std::vector<std::size_t> beta_order(betas.size());
    for (std::size_t b = 0; b < betas.size(); ++b) beta_order[b] = b;
    std::stable_sort(dims.begin(), dims.end());
    std::stable_sort(beta_order.begin(), beta_order.end(),
                     [&](std::size_t x, std::size_t y) { return betas[x] < betas[y]; });

    const std::size_t per_d = beta_order.size() * config.instances;
    std::vector<SweepRow> rows(dims.size() * per_d);
    parallel_for(rows.size(), resolve_threads(config.threads), [&](std::size_t idx) {
        const std::size_t di = idx / per_d;
        const std::size_t bi = beta_order[(idx % per_d) / config.instances];
        const std::size_t inst = idx % config.instances;
        auto rng = make_stream(config.seed, dims[di], bi, inst);
        const auto model = linear ? OutcomeModel::linear_binary() : OutcomeModel::logistic(betas[bi]);
        const auto instance = sample_instance(rng, dims[di], config.n, config.m, model);
        const auto belief = BeliefState::dirichlet(config.m, rng);
        const auto report = ts_info_ratio(instance, belief);
        SweepRow & row = rows[idx];
        row.d = dims[di];
        row.beta = betas[bi];
        row.instance = inst;
        row.numerator = report.numerator;
        row.denominator = report.denominator;
        row.ratio = report.ratio;
        row.violated = report.ratio > static_cast<double>(row.d) / 2.0 + 1e-9;
    });
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow> & rows, bool linear) {
    std::ostringstream out;
    out << "d,beta,instance_id,numerator,denominator_nats,ratio,bound_d_over_2,violated\n";
    for (const auto & r : rows)
        out << r.d << ',' << (linear ? std::string() : format_double(r.beta)) << ',' << r.instance
            << ',' << format_double(r.numerator) << ',' << format_double(r.denominator) << ','
            << format_double(r.ratio) << ',' << format_double(static_cast<double>(r.d) / 2.0) << ','
            << (r.violated ? "true" : "false") << '\n';
    return out.str();
}

std::string sweep_to_svg(const std::vector<SweepRow> & rows) {
    const double w = 640, h = 400, pad = 40;
    std::size_t dmax = 1;
    double ymax = 0.5;
    for (const auto & r : rows) {
        dmax = std::max(dmax, r.d);
        ymax = std::max({ymax, r.ratio, static_cast<double>(r.d) / 2.0});
    }
    auto x = [&](double d) { return pad + (w - 2 * pad) * d / static_cast<double>(dmax + 1); };
    auto y = [&](double v) { return h - pad - (h - 2 * pad) * v / ymax; };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"red\" stroke-dasharray=\"6,4\" points=\"";
    for (std::size_t d = 1; d <= dmax; ++d)
        out << svg_number(x(static_cast<double>(d))) << ',' << svg_number(y(d / 2.0)) << ' ';
    out << "\"/>\n";
    for (const auto & r : rows)
        out << "<circle cx=\"" << svg_number(x(static_cast<double>(r.d))) << "\" cy=\""
            << svg_number(y(r.ratio)) << "\" r=\"1.5\" fill=\"steelblue\" fill-opacity=\"0.4\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" font-size=\"12\">d</text>\n";
    out << "<text x=\"6\" y=\"" << pad - 10 << "\" font-size=\"12\">information ratio</text>\n";
    out << "</svg>\n";
    return out.str();
}

namespace {

int cmd_ir_sweep(const Common & common, const SweepConfig & base, const std::string & dims,
                 const std::string & betas, const std::string & svg, std::ostream & out) {
    SweepConfig config = base;
    config.dims = parse_size_list(dims);
    config.betas = parse_real_list(betas);
    config.seed = common.seed;
    config.threads = common.threads;
    const auto rows = ir_sweep(config);
    const bool linear = config.model == "linear";
    if (common.format == "json") {
        std::ostringstream s;
        s << '[';
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto & r = rows[k];
            s << (k ? "," : "") << "{\"d\":" << r.d;
            if (!linear) s << ",\"beta\":" << format_double(r.beta);
            s << ",\"instance_id\":" << r.instance << ",\"numerator\":" << format_double(r.numerator)
              << ",\"denominator_nats\":" << format_double(r.denominator)
              << ",\"ratio\":" << format_double(r.ratio)
              << ",\"bound_d_over_2\":" << format_double(r.d / 2.0)
              << ",\"violated\":" << (r.violated ? "true" : "false") << '}';
        }
        s << "]\n";
        emit(common, s.str(), out);
    } else {
        emit(common, sweep_to_csv(rows, linear), out);
    }
    if (!svg.empty()) {
        std::ofstream file(svg, std::ios::binary);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open " + svg);
        file << sweep_to_svg(rows);
    }
    const bool any = std::any_of(rows.begin(), rows.end(), [](const SweepRow & r) { return r.violated; });
    return any ? kViolated : kOk;
}

struct RegretArgs {
    ModelOptions model;
    std::size_t d = 3, n = 30, m = 30, horizon = 500, runs = 300;
    double delta = 0.0;
    bool realized = false;
    std::string instance;
};

int cmd_regret(const Common & common, const RegretArgs & a, std::ostream & out) {
    const auto model = make_model(a.model);
    const auto instance = load_or_sample(a.instance, common, a.d, a.n, a.m, model);
    const double d = static_cast<double>(instance.dim());
    const auto prior = BeliefState::uniform(instance.num_params());
    SimulationOptions sim;
    sim.threads = resolve_threads(common.threads);
    sim.realized = a.realized;
    RegretTrace trace;
    if (a.horizon > 0) trace = simulate_ts(instance, prior, a.horizon, a.runs, common.seed, sim);

    const auto [lo, hi] = instance.inner_range();
    const double delta = a.delta > 0.0 ? a.delta : instance.margin();
    auto bound_at = [&](double t) {
        switch (model.kind()) {
            case ModelKind::LinearBinary: return linear_bound(d, t);
            case ModelKind::Glm: return glm_bound(d, t, c_phi(model, lo, hi));
            case ModelKind::Logistic: return logistic_bound(d, t, model.beta(), delta).primary;
        }
        return 0.0;
    };
    std::vector<double> bounds(a.horizon);
    for (std::size_t t = 0; t < a.horizon; ++t) bounds[t] = bound_at(static_cast<double>(t + 1));

    const bool passed = a.horizon == 0 || trace.cumulative <= bounds.back();
    std::ostringstream s;
    if (common.format == "json") {
        s << "{\"model\":\"" << model_kind_name(model.kind()) << "\",\"T\":" << a.horizon
          << ",\"runs\":" << a.runs << ",\"rows\":[";
        for (std::size_t t = 0; t < a.horizon; ++t)
            s << (t ? "," : "") << "{\"t\":" << t + 1
              << ",\"mean_regret\":" << format_double(trace.per_period_regret[t])
              << ",\"cum_regret\":" << format_double(trace.cumulative_regret[t])
              << ",\"std_err\":" << format_double(trace.std_error[t])
              << ",\"bound_value\":" << format_double(bounds[t]) << '}';
        s << "],\"passed\":" << (passed ? "true" : "false") << "}\n";
    } else {
        s << "t,mean_regret,cum_regret,std_err,bound_value\n";
        for (std::size_t t = 0; t < a.horizon; ++t)
            s << t + 1 << ',' << format_double(trace.per_period_regret[t]) << ','
              << format_double(trace.cumulative_regret[t]) << ',' << format_double(trace.std_error[t])
              << ',' << format_double(bounds[t]) << '\n';
    }
    emit(common, s.str(), out);
    return passed ? kOk : kViolated;
}

struct PartitionArgs {
    ModelOptions model;
    std::size_t d = 2, n = 30, m = 30;
    double epsilon = 0.1;
    double delta = 0.0;
    std::string builder = "auto";
    std::string instance;
};

int cmd_partition(const Common & common, const PartitionArgs & a, std::ostream & out) {
    const auto model = make_model(a.model);
    const bool layered = a.builder == "layered" ||
                         (a.builder == "auto" && model.kind() == ModelKind::Logistic && a.delta > 0.0);
    const auto instance =
        load_or_sample(a.instance, common, a.d, a.n, a.m, model, layered ? a.delta : 0.0);
    const auto built = make_partition(instance, a.builder, a.epsilon, a.delta);
    const auto & p = built.partition;
    const double dist = max_intra_cell_distortion(instance, p);
    const double info = statistic_mutual_information(BeliefState::uniform(instance.num_params()), p);
    const bool passed = dist <= a.epsilon + kCertificateTolerance &&
                        static_cast<double>(p.num_cells()) <= p.cardinality_bound();
    std::ostringstream s;
    if (common.format == "csv") {
        s << "K,epsilon,max_intra_cell_distortion,formula_bound,packing_bound,I_theta_psi_nats,builder\n"
          << p.num_cells() << ',' << format_double(a.epsilon) << ',' << format_double(dist) << ','
          << format_double(built.formula_bound) << ',' << format_double(p.cardinality_bound()) << ','
          << format_double(info) << ',' << built.builder << '\n';
    } else {
        s << "{\"K\":" << p.num_cells() << ",\"epsilon\":" << format_double(a.epsilon)
          << ",\"max_intra_cell_distortion\":" << format_double(dist)
          << ",\"formula_bound\":" << format_double(built.formula_bound)
          << ",\"packing_bound\":" << format_double(p.cardinality_bound())
          << ",\"I_theta_psi_nats\":" << format_double(info) << ",\"builder\":\"" << built.builder
          << "\",\"partition\":" << partition_to_json(p) << "}\n";
    }
    emit(common, s.str(), out);
    return passed ? kOk : kViolated;
}

struct BoundsArgs {
    std::string which;
    ModelOptions model;
    double d = 0, horizon = 0, beta = 0, delta = 0, gamma = 0, entropy = 0, info = 0, epsilon = 0,
           cphi = 0, lo = 0, hi = 0;
    std::string kind = "linear";
};

std::string bound_rows(const std::vector<BoundReport> & rows, const std::string & format) {
    std::ostringstream s;
    if (format == "json") {
        s << '[';
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto & r = rows[k];
            s << (k ? "," : "") << "{\"name\":\"" << r.name << "\",\"value\":" << format_double(r.value)
              << ",\"inputs\":{";
            bool first = true;
            for (const auto & [key, v] : r.inputs) {
                s << (first ? "" : ",") << '"' << key << "\":" << format_double(v);
                first = false;
            }
            s << "},\"flags\":{";
            first = true;
            for (const auto & [key, v] : r.flags) {
                s << (first ? "" : ",") << '"' << key << "\":" << (v ? "true" : "false");
                first = false;
            }
            s << "}}";
        }
        s << "]\n";
        return s.str();
    }
    s << "name,value,inputs,flags\n";
    for (const auto & r : rows) {
        s << r.name << ',' << format_double(r.value) << ',';
        bool first = true;
        for (const auto & [key, v] : r.inputs) {
            s << (first ? "" : ";") << key << '=' << format_double(v);
            first = false;
        }
        s << ',';
        first = true;
        for (const auto & [key, v] : r.flags) {
            s << (first ? "" : ";") << key << '=' << (v ? "true" : "false");
            first = false;
        }
        s << '\n';
    }
    return s.str();
}

int cmd_bounds(const Common & common, const BoundsArgs & a, const CLI::App & sub, std::ostream & out) {
    static const std::map<std::string, std::set<std::string>> needs = {
        {"entropy", {"--gamma", "--entropy", "--T"}},
        {"compressed", {"--gamma", "--info", "--epsilon", "--T"}},
        {"linear", {"--d", "--T"}},
        {"glm", {"--d", "--T", "--cphi"}},
        {"logistic", {"--d", "--T", "--beta", "--delta"}},
        {"cphi", {"--model", "--lo", "--hi"}},
        {"partition-count", {"--d", "--epsilon", "--kind"}},
    };
    static const std::set<std::string> optional_for_cphi = {"--beta", "--link", "--eta"};
    static const std::set<std::string> optional_for_count = {"--cphi", "--beta", "--delta"};
    static const std::vector<std::string> all = {"--d", "--T", "--beta", "--delta", "--gamma",
                                                 "--entropy", "--info", "--epsilon", "--cphi",
                                                 "--lo", "--hi", "--model", "--link", "--eta", "--kind"};
    const auto & req = needs.at(a.which);
    for (const auto & flag : all) {
        const bool given = sub.count(flag) > 0;
        const bool allowed = req.count(flag) ||
                             (a.which == "cphi" && optional_for_cphi.count(flag)) ||
                             (a.which == "partition-count" && optional_for_count.count(flag));
        if (given && !allowed)
            throw Error(ErrorCode::InvalidArgument, flag + " does not apply to --which " + a.which);
    }
    for (const auto & flag : req)
        if (sub.count(flag) == 0 && !(flag == "--kind" || flag == "--model"))
            throw Error(ErrorCode::InvalidArgument, "--which " + a.which + " needs " + flag);

    std::vector<BoundReport> rows;
    if (a.which == "entropy") {
        rows.push_back({"entropy", entropy_bound(a.gamma, a.entropy, a.horizon),
                        {{"gamma_bar", a.gamma}, {"entropy", a.entropy}, {"T", a.horizon}}, {}});
    } else if (a.which == "compressed") {
        rows.push_back({"compressed", compressed_bound(a.gamma, a.info, a.epsilon, a.horizon),
                        {{"gamma_bar", a.gamma}, {"info", a.info}, {"epsilon", a.epsilon}, {"T", a.horizon}},
                        {}});
    } else if (a.which == "linear") {
        rows.push_back({"linear", linear_bound(a.d, a.horizon), {{"d", a.d}, {"T", a.horizon}}, {}});
    } else if (a.which == "glm") {
        rows.push_back({"glm", glm_bound(a.d, a.horizon, a.cphi),
                        {{"d", a.d}, {"T", a.horizon}, {"c_phi", a.cphi}}, {}});
    } else if (a.which == "logistic") {
        const auto lb = logistic_bound(a.d, a.horizon, a.beta, a.delta);
        const std::map<std::string, double> in = {
            {"d", a.d}, {"T", a.horizon}, {"beta", a.beta}, {"delta", a.delta}};
        rows.push_back({"logistic", lb.primary, in, {{"epsilon_out_of_range", lb.epsilon_out_of_range}}});
        rows.push_back({"logistic_simplified", lb.simplified, in,
                        {{"epsilon_out_of_range", lb.epsilon_out_of_range}}});
    } else if (a.which == "cphi") {
        rows.push_back({"cphi", c_phi(make_model(a.model), a.lo, a.hi),
                        {{"lo", a.lo}, {"hi", a.hi}, {"beta", a.model.beta}}, {}});
    } else {
        PartitionCountInputs in;
        in.d = a.d;
        in.epsilon = a.epsilon;
        if (a.kind == "glm") {
            in.kind = PartitionBoundKind::Glm;
            in.c_phi = a.cphi;
        } else if (a.kind == "logistic") {
            in.kind = PartitionBoundKind::Logistic;
            in.beta = a.beta;
            in.delta = a.delta;
        }
        rows.push_back({"partition-count", partition_count_bound(in),
                        {{"d", a.d}, {"epsilon", a.epsilon}}, {}});
    }
    emit(common, bound_rows(rows, common.format), out);
    return kOk;
}

struct AuditArgs {
    ModelOptions model{"logistic", 1.0, "logistic", 0.0};
    std::size_t d = 2, n = 4, m = 6, horizon = 10, runs = 2000, max_states = 2'000'000;
    double epsilon = 0.1;
    double delta = 0.0;
    std::string builder = "auto";
    std::string instance;
};

int cmd_audit(const Common & common, const AuditArgs & a, std::ostream & out) {
    const auto model = make_model(a.model);
    const bool layered = a.builder == "layered" ||
                         (a.builder == "auto" && model.kind() == ModelKind::Logistic && a.delta > 0.0);
    const auto instance =
        load_or_sample(a.instance, common, a.d, a.n, a.m, model, layered ? a.delta : 0.0);
    const auto built = make_partition(instance, a.builder, a.epsilon, a.delta);
    AuditOptions options;
    options.runs = a.runs;
    options.threads = resolve_threads(common.threads);
    options.max_states = a.max_states;
    const auto report = audit_theorem1_chain(instance, BeliefState::uniform(instance.num_params()),
                                             built.partition, a.horizon, common.seed, options);
    emit(common, common.format == "json" ? audit_to_json(report) + "\n" : audit_to_csv(report), out);
    return report.passed ? kOk : kViolated;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream & out, std::ostream & err) {
    CLI::App app{"Rate-distortion Thompson sampling laboratory", "rdts"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    Common common;

    SweepConfig sweep;
    std::string sweep_dims = "2-20", sweep_betas = "0.1,1,10,100", sweep_svg;
    auto * ir = app.add_subcommand("ir-sweep", "Information ratio of random instances against d/2");
    add_common(*ir, common);
    ir->add_option("--model", sweep.model)->check(CLI::IsMember({"linear", "logistic"}));
    ir->add_option("--d", sweep_dims, "Dimensions, e.g. 2-20 or 2,5,10");
    ir->add_option("--beta", sweep_betas, "Logistic slopes, comma separated");
    ir->add_option("--n", sweep.n);
    ir->add_option("--m", sweep.m);
    ir->add_option("--instances", sweep.instances);
    ir->add_option("--svg", sweep_svg, "Also write a scatter plot");

    RegretArgs regret;
    auto * rg = app.add_subcommand("regret", "Monte Carlo Bayesian regret against the closed-form bound");
    add_common(*rg, common);
    add_model(*rg, regret.model);
    rg->add_option("--d", regret.d);
    rg->add_option("--n", regret.n);
    rg->add_option("--m", regret.m);
    rg->add_option("--T", regret.horizon);
    rg->add_option("--runs", regret.runs);
    rg->add_option("--delta", regret.delta, "Logistic margin for the bound (default: instance margin)");
    rg->add_flag("--realized", regret.realized, "Score realized rewards");
    rg->add_option("--instance", regret.instance, "Instance JSON file");

    PartitionArgs part;
    auto * pt = app.add_subcommand("partition", "Build and certify a distortion-bounded partition");
    add_common(*pt, common);
    add_model(*pt, part.model);
    pt->add_option("--d", part.d);
    pt->add_option("--n", part.n);
    pt->add_option("--m", part.m);
    pt->add_option("--epsilon", part.epsilon);
    pt->add_option("--delta", part.delta);
    pt->add_option("--builder", part.builder)->check(CLI::IsMember({"auto", "linear", "glm", "layered"}));
    pt->add_option("--instance", part.instance);

    BoundsArgs bounds;
    auto * bd = app.add_subcommand("bounds", "Evaluate a closed-form regret bound");
    add_common(*bd, common);
    bd->add_option("--which", bounds.which)
        ->required()
        ->check(CLI::IsMember({"entropy", "compressed", "linear", "glm", "logistic", "cphi",
                               "partition-count"}));
    bd->add_option("--model", bounds.model.kind)->check(CLI::IsMember({"linear", "logistic", "glm"}));
    bd->add_option("--link", bounds.model.link)->check(CLI::IsMember({"logistic", "probit"}));
    bd->add_option("--eta", bounds.model.eta);
    bd->add_option("--d", bounds.d);
    bd->add_option("--T", bounds.horizon);
    bd->add_option("--beta", bounds.beta);
    bd->add_option("--delta", bounds.delta);
    bd->add_option("--gamma", bounds.gamma);
    bd->add_option("--entropy", bounds.entropy);
    bd->add_option("--info", bounds.info);
    bd->add_option("--epsilon", bounds.epsilon);
    bd->add_option("--cphi", bounds.cphi);
    bd->add_option("--lo", bounds.lo);
    bd->add_option("--hi", bounds.hi);
    bd->add_option("--kind", bounds.kind)->check(CLI::IsMember({"linear", "glm", "logistic"}));

    AuditArgs audit;
    auto * au = app.add_subcommand("audit", "Exact audit of the compressed regret decomposition");
    add_common(*au, common);
    add_model(*au, audit.model);
    au->add_option("--d", audit.d);
    au->add_option("--n", audit.n);
    au->add_option("--m", audit.m);
    au->add_option("--T", audit.horizon);
    au->add_option("--runs", audit.runs);
    au->add_option("--epsilon", audit.epsilon);
    au->add_option("--delta", audit.delta);
    au->add_option("--builder", audit.builder)->check(CLI::IsMember({"auto", "linear", "glm", "layered"}));
    au->add_option("--max-states", audit.max_states);
    au->add_option("--instance", audit.instance);

    try {
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError & e) {
        error_line(err, "ConfigError", e.what());
        return kConfigError;
    } catch (const Error & e) {
        error_line(err, std::string(to_string(e.code())), e.what());
        return kConfigError;
    }

    try {
        if (*ir) {
            if (common.format.empty()) common.format = "csv";
            return cmd_ir_sweep(common, sweep, sweep_dims, sweep_betas, sweep_svg, out);
        }
        if (*rg) {
            if (common.format.empty()) common.format = "csv";
            return cmd_regret(common, regret, out);
        }
        if (*pt) {
            if (common.format.empty()) common.format = "json";
            return cmd_partition(common, part, out);
        }
        if (*bd) {
            if (common.format.empty()) common.format = "csv";
            if (bd->count("--beta")) bounds.model.beta = bounds.beta;
            return cmd_bounds(common, bounds, *bd, out);
        }
        if (common.format.empty()) common.format = "csv";
        return cmd_audit(common, audit, out);
    } catch (const Error & e) {
        error_line(err, std::string(to_string(e.code())), e.what());
        return kConfigError;
    } catch (const std::exception & e) {
        error_line(err, "InternalError", e.what());
        return kConfigError;
    }
}

}  // namespace rdts::cli
