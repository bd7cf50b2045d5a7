#include "dmdplace/config.hpp"

#include "dmdplace/io.hpp"

#include <cmath>
#include <stdexcept>

namespace dmdplace {

Index ExperimentConfig::n_t() const {
    return static_cast<Index>(std::llround(t_final / dt));
}

std::vector<Index> ExperimentConfig::candidate_nodes() const {
    std::vector<Index> nodes;
    for (Index i = std::max<Index>(1, lower_bound); i <= upper(); ++i) {
        nodes.push_back(i);
    }
    return nodes;
}

PlacementTemplate ExperimentConfig::placement_template() const {
    PlacementTemplate tmpl;
    tmpl.candidates   = candidate_nodes();
    tmpl.n_sensors    = n_sensors;
    tmpl.truncation   = truncation;
    tmpl.hankel_depth = hankel_depth;
    tmpl.lower_bound  = std::max<Index>(1, lower_bound);
    tmpl.upper_bound  = upper();
    tmpl.decimation   = decimation;
    tmpl.dmd_stacks   = dmd_stacks;
    tmpl.dmd_rank     = dmd_rank;
    return tmpl;
}

SimulationParams ExperimentConfig::simulation_params() const {
    return SimulationParams{n_nodes, dt, t_final};
}

void ExperimentConfig::validate() const {
    if (schema_version != 1) {
        throw std::invalid_argument("config: unsupported schema_version");
    }
    mode_set.validate();
    if (n_nodes < 2) {
        throw std::invalid_argument("config: n_nodes must be >= 2");
    }
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw std::invalid_argument("config: dt and t_final must be positive");
    }
    double f_max = 0.0;
    for (const ModeSpec& m : mode_set.modes) {
        f_max = std::max(f_max, m.freq_hz);
    }
    if (dt >= 0.5 / f_max) {
        throw std::invalid_argument("config: dt = " + format_g17(dt) +
                                    " violates the Nyquist bound 1/(2*" +
                                    format_g17(f_max) + " Hz)");
    }
    if (n_t() < 3) {
        throw std::invalid_argument("config: fewer than 3 time samples");
    }
    if (dmd_stacks < 1) {
        throw std::invalid_argument("config: dmd stacks must be >= 1");
    }
    if (n_t() < dmd_stacks + 1) {
        throw std::invalid_argument("config: record shorter than dmd stacks + 1");
    }
    const Index max_rank = std::min(dmd_stacks * n_nodes, n_t() - dmd_stacks);
    if (dmd_rank < 1 || dmd_rank > max_rank) {
        throw std::invalid_argument("config: dmd rank outside [1, " +
                                    std::to_string(max_rank) + "]");
    }
    if (truncation < 1 || truncation > dmd_rank) {
        throw std::invalid_argument("config: truncation index outside [1, dmd rank]");
    }
    if (decimation < 1) {
        throw std::invalid_argument("config: decimation must be >= 1");
    }
    if (hankel_depth < 0) {
        throw std::invalid_argument("config: hankel depth must be >= 0");
    }
    if (lower_bound < 1 || upper() < lower_bound || upper() > n_nodes - 1) {
        throw std::invalid_argument("config: candidate bounds outside [1, n_nodes - 1]");
    }
    const Index n_candidates = upper() - std::max<Index>(1, lower_bound) + 1;
    if (n_sensors < 1 || n_sensors > n_candidates) {
        throw std::invalid_argument("config: n_sensors outside [1, candidate count]");
    }
    if (!(pair_mass >= 0.0)) {
        throw std::invalid_argument("config: pair mass must be >= 0");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("config: max_iters must be >= 1");
    }
    if (!(control_weight > 0.0)) {
        throw std::invalid_argument("config: control weight must be positive");
    }
    if (!(horizon > 0.0) || horizon < 2.0 * dt) {
        throw std::invalid_argument("config: horizon must cover at least 2 samples");
    }
    if (!(band > 0.0 && band < 1.0)) {
        throw std::invalid_argument("config: settling band must lie in (0, 1)");
    }
    if (output_dir.empty()) {
        throw std::invalid_argument("config: output_dir must be nonempty");
    }

    // Exercise the placement preconditions on a dimension-only dummy so a
    // bad subset budget is caught before any stage runs.
    PlacementProblem probe;
    probe.Y            = Matrix::Zero(n_nodes, 2 * std::max<Index>(1, hankel_depth));
    probe.candidates   = candidate_nodes();
    probe.n_sensors    = n_sensors;
    probe.hankel_depth = std::max<Index>(1, hankel_depth);
    probe.truncation   = truncation;
    probe.lower_bound  = std::max<Index>(1, lower_bound);
    probe.upper_bound  = upper();
    probe.validate();
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& value) {
    if (j.contains(key)) {
        value = j.at(key).get<T>();
    }
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    read_field(j, "schema_version", config.schema_version);

    if (j.contains("beam")) {
        const auto& beam = j.at("beam");
        read_field(beam, "length", config.mode_set.beam_length);
        if (beam.contains("n_nodes")) {
            config.n_nodes = beam.at("n_nodes").get<Index>();
        }
        if (beam.contains("modes")) {
            config.mode_set.modes.clear();
            for (const auto& row : beam.at("modes")) {
                ModeSpec mode;
                read_field(row, "lambda", mode.lambda_const);
                read_field(row, "amplitude", mode.amplitude);
                read_field(row, "freq_hz", mode.freq_hz);
                read_field(row, "zeta", mode.zeta);
                config.mode_set.modes.push_back(mode);
            }
        }
    }
    if (j.contains("sampling")) {
        read_field(j.at("sampling"), "dt", config.dt);
        read_field(j.at("sampling"), "t_final", config.t_final);
    }
    if (j.contains("dmd")) {
        read_field(j.at("dmd"), "stacks", config.dmd_stacks);
        read_field(j.at("dmd"), "rank", config.dmd_rank);
    }
    if (j.contains("hankel")) {
        read_field(j.at("hankel"), "depth", config.hankel_depth);
    }
    if (j.contains("placement")) {
        const auto& p = j.at("placement");
        read_field(p, "n_sensors", config.n_sensors);
        read_field(p, "truncation", config.truncation);
        read_field(p, "decimation", config.decimation);
        read_field(p, "lower", config.lower_bound);
        read_field(p, "upper", config.upper_bound);
    }
    if (j.contains("loop")) {
        read_field(j.at("loop"), "pair_mass", config.pair_mass);
        read_field(j.at("loop"), "max_iters", config.max_iters);
    }
    if (j.contains("control")) {
        read_field(j.at("control"), "weight", config.control_weight);
        read_field(j.at("control"), "horizon", config.horizon);
        read_field(j.at("control"), "band", config.band);
    }
    read_field(j, "output_dir", config.output_dir);
    read_field(j, "seed", config.seed);
    return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json modes = nlohmann::json::array();
    for (const ModeSpec& m : config.mode_set.modes) {
        modes.push_back({{"lambda", m.lambda_const},
                         {"amplitude", m.amplitude},
                         {"freq_hz", m.freq_hz},
                         {"zeta", m.zeta}});
    }
    return nlohmann::json{
        {"schema_version", config.schema_version},
        {"beam",
         {{"length", config.mode_set.beam_length},
          {"n_nodes", config.n_nodes},
          {"modes", std::move(modes)}}},
        {"sampling", {{"dt", config.dt}, {"t_final", config.t_final}}},
        {"dmd", {{"stacks", config.dmd_stacks}, {"rank", config.dmd_rank}}},
        {"hankel", {{"depth", config.hankel_depth}}},
        {"placement",
         {{"n_sensors", config.n_sensors},
          {"truncation", config.truncation},
          {"decimation", config.decimation},
          {"lower", config.lower_bound},
          {"upper", config.upper_bound}}},
        {"loop", {{"pair_mass", config.pair_mass}, {"max_iters", config.max_iters}}},
        {"control",
         {{"weight", config.control_weight},
          {"horizon", config.horizon},
          {"band", config.band}}},
        {"output_dir", config.output_dir},
        {"seed", config.seed},
    };
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    if (path.empty()) {
        return ExperimentConfig{};
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    return config_from_json(j);
}

}  // namespace dmdplace
