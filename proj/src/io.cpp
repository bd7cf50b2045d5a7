#include "dmdplace/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dmdplace {

namespace {

json complex_to_json(const Complex& z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) {
        return Matrix(0, 0);
    }
    const Index cols = static_cast<Index>(j.at(0).size());
    Matrix      m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        arr.push_back(v(i));
    }
    return arr;
}

Vector vector_from_json(const json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) {
        v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

json complex_vector_to_json(const ComplexVector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        arr.push_back(complex_to_json(v(i)));
    }
    return arr;
}

ComplexVector complex_vector_from_json(const json& j) {
    ComplexVector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) {
        v(i) = complex_from_json(j.at(static_cast<std::size_t>(i)));
    }
    return v;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) {
        return ComplexMatrix(0, 0);
    }
    const Index   cols = static_cast<Index>(j.at(0).size());
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = complex_from_json(
                j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)));
        }
    }
    return m;
}

std::vector<double> split_csv_line(const std::string& line) {
    std::vector<double> out;
    std::size_t         start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) {
            end = line.size();
        }
        const std::string cell = line.substr(start, end - start);
        if (!cell.empty()) {
            out.push_back(std::stod(cell));
        }
        start = end + 1;
        if (end == line.size()) {
            break;
        }
    }
    return out;
}

}  // namespace

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string snapshot_to_csv(const SnapshotData& data) {
    std::ostringstream out;
    out << "t";
    for (Index i = 0; i < data.n_nodes(); ++i) {
        out << ',' << format_g17(data.node_x(i));
    }
    out << '\n';
    for (Index k = 0; k < data.n_t(); ++k) {
        out << format_g17(static_cast<double>(k) * data.dt);
        for (Index i = 0; i < data.n_nodes(); ++i) {
            out << ',' << format_g17(data.values(i, k));
        }
        out << '\n';
    }
    return out.str();
}

SnapshotData snapshot_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string        line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("snapshot_from_csv: empty file");
    }
    if (line.rfind("t,", 0) != 0) {
        throw std::runtime_error("snapshot_from_csv: missing header row");
    }
    const std::vector<double> header = split_csv_line(line.substr(2));
    const Index               n_nodes = static_cast<Index>(header.size());
    if (n_nodes < 2) {
        throw std::runtime_error("snapshot_from_csv: fewer than 2 node columns");
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> cells = split_csv_line(line);
        if (static_cast<Index>(cells.size()) != n_nodes + 1) {
            throw std::runtime_error("snapshot_from_csv: ragged row");
        }
        rows.push_back(std::move(cells));
    }
    if (rows.size() < 2) {
        throw std::runtime_error("snapshot_from_csv: need at least 2 time samples");
    }

    SnapshotData data;
    data.node_x = Eigen::Map<const Vector>(header.data(), n_nodes);
    data.dt     = rows[1][0] - rows[0][0];
    data.values.resize(n_nodes, static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (Index i = 0; i < n_nodes; ++i) {
            data.values(i, static_cast<Index>(k)) = rows[k][static_cast<std::size_t>(i) + 1];
        }
    }
    return data;
}

std::string matrix_to_csv(const std::vector<std::string>& columns,
                          const Matrix& rows) {
    if (static_cast<Index>(columns.size()) != rows.cols()) {
        throw std::invalid_argument("matrix_to_csv: header width does not match");
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i == 0 ? "" : ",") << columns[i];
    }
    out << '\n';
    for (Index i = 0; i < rows.rows(); ++i) {
        for (Index j = 0; j < rows.cols(); ++j) {
            out << (j == 0 ? "" : ",") << format_g17(rows(i, j));
        }
        out << '\n';
    }
    return out.str();
}

std::string landscape_to_csv(const std::vector<LandscapePoint>& landscape) {
    std::ostringstream out;
    out << "outer_index,partner_index,cost\n";
    for (const LandscapePoint& point : landscape) {
        out << point.outer << ',' << point.partner << ',' << format_g17(point.cost)
            << '\n';
    }
    return out.str();
}

json dmd_model_to_json(const DmdModel& model) {
    json j;
    j["dt"]          = model.dt;
    j["rank"]        = model.rank;
    j["stacks"]      = model.stacks;
    j["n_state"]     = model.n_state;
    j["sigma_r"]     = vector_to_json(model.sigma_r);
    j["U_r"]         = matrix_to_json(model.U_r);
    j["V_r"]         = matrix_to_json(model.V_r);
    j["A_tilde"]     = matrix_to_json(model.A_tilde);
    j["eigenvalues"] = complex_vector_to_json(model.eigenvalues);
    j["amplitudes"]  = complex_vector_to_json(model.amplitudes);
    j["modes"]       = complex_matrix_to_json(model.modes);
    return j;
}

DmdModel dmd_model_from_json(const json& j) {
    DmdModel model;
    model.dt          = j.at("dt").get<double>();
    model.rank        = j.at("rank").get<Index>();
    model.stacks      = j.at("stacks").get<Index>();
    model.n_state     = j.at("n_state").get<Index>();
    model.sigma_r     = vector_from_json(j.at("sigma_r"));
    model.U_r         = matrix_from_json(j.at("U_r"));
    model.V_r         = matrix_from_json(j.at("V_r"));
    model.A_tilde     = matrix_from_json(j.at("A_tilde"));
    model.eigenvalues = complex_vector_from_json(j.at("eigenvalues"));
    model.amplitudes  = complex_vector_from_json(j.at("amplitudes"));
    model.modes       = complex_matrix_from_json(j.at("modes"));
    return model;
}

json placement_result_to_json(const PlacementResult& result) {
    json j;
    j["best_subset"] = result.best_subset;
    j["best_cost"]   = result.best_cost;
    j["evaluations"] = result.evaluations;
    json landscape   = json::array();
    for (const LandscapePoint& point : result.landscape) {
        landscape.push_back(
            {{"outer", point.outer}, {"partner", point.partner}, {"cost", point.cost}});
    }
    j["landscape"] = std::move(landscape);
    return j;
}

json corrected_modes_to_json(const CorrectedModes& corrected,
                             const ModeSet& unloaded) {
    json table = json::array();
    for (Index i = 0; i < corrected.n_report; ++i) {
        table.push_back({{"mode", i + 1},
                         {"freq_hz_unloaded", unloaded.modes[static_cast<std::size_t>(i)].freq_hz},
                         {"freq_hz_corrected", corrected.corrected_freq_hz(i)},
                         {"ratio", corrected.freq_ratios(i)}});
    }
    json j;
    j["frequency_table"] = std::move(table);
    j["freq_ratios"]     = vector_to_json(corrected.freq_ratios);
    j["eta"]             = matrix_to_json(corrected.eta);
    j["corrected_shapes"] = matrix_to_json(corrected.corrected_shapes);
    j["n_report"]         = corrected.n_report;
    return j;
}

json design_result_to_json(const DesignResult& result) {
    json iterations = json::array();
    for (const DesignIteration& it : result.history) {
        iterations.push_back({{"index", it.index},
                              {"placement", it.placement},
                              {"cost", it.cost},
                              {"corrected_freq_hz", vector_to_json(it.corrected_freq_hz)},
                              {"dmd_rank", it.dmd_rank},
                              {"eigenvalues", complex_vector_to_json(it.eigenvalues)}});
    }
    json j;
    j["iterations"]      = std::move(iterations);
    j["converged"]       = result.converged;
    j["cycle_detected"]  = result.cycle_detected;
    j["final_placement"] = result.final_placement;
    return j;
}

json equivalence_summary_to_json(const EquivalenceSummary& summary) {
    json trials = json::array();
    for (const EquivalenceReport& rep : summary.trials) {
        trials.push_back({{"n", rep.n},
                          {"s", rep.s},
                          {"r", rep.r},
                          {"max_rel_dev", rep.max_rel_dev}});
    }
    json j;
    j["trials"]    = std::move(trials);
    j["summary"]   = {{"trials", summary.trials.size()},
                      {"worst_dev", summary.worst_dev},
                      {"pass", summary.pass}};
    return j;
}

namespace {

json config_metrics_to_json(const ConfigMetrics& m) {
    json j;
    j["label"]                  = m.label;
    j["psd_variance"]           = vector_to_json(m.psd_variance);
    j["overshoot_pct"]          = vector_to_json(m.overshoot_pct);
    j["settling_time"]          = vector_to_json(m.settling_time);
    j["settled"]                = m.settled;
    j["control_effort"]         = vector_to_json(m.effort);
    j["aggregate"]              = {{"psd_variance", m.agg_psd},
                                   {"overshoot_pct", m.agg_overshoot},
                                   {"settling_time", m.agg_settling},
                                   {"settled", m.agg_settled},
                                   {"control_effort", m.agg_effort}};
    return j;
}

std::string fixed_width(const std::string& s, int width) {
    if (static_cast<int>(s.size()) >= width) {
        return s;
    }
    return s + std::string(static_cast<std::size_t>(width - static_cast<int>(s.size())), ' ');
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::string fix3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string settling_cell(double value, bool settled, double horizon) {
    if (!settled) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "> %g", horizon);
        return buf;
    }
    return fix3(value);
}

}  // namespace

json metric_report_to_json(const MetricReport& report) {
    json j;
    j["horizon"]    = report.horizon;
    j["optimal"]    = config_metrics_to_json(report.optimal);
    j["suboptimal"] = config_metrics_to_json(report.suboptimal);
    j["open_loop"]  = config_metrics_to_json(report.open_loop);
    return j;
}

std::string metric_report_to_text(const MetricReport& report) {
    const int          label_w = 12;
    const int          cell_w  = 14;
    std::ostringstream out;

    const Index p = report.optimal.psd_variance.size();
    out << fixed_width("Metric", label_w);
    for (Index c = 0; c < p; ++c) {
        out << fixed_width("Channel " + std::to_string(c + 1), cell_w);
    }
    out << "Aggregate\n";

    auto section = [&](const std::string& title, const std::string& agg_rule) {
        out << title << "  (" << agg_rule << ")\n";
    };
    auto row = [&](const std::string& label, const Vector& cells, double agg) {
        out << fixed_width(label, label_w);
        for (Index c = 0; c < cells.size(); ++c) {
            out << fixed_width(sci(cells(c)), cell_w);
        }
        out << sci(agg) << '\n';
    };

    section("Variance from Spectrum (Integrated PSD)", "sum");
    row("Optimal", report.optimal.psd_variance, report.optimal.agg_psd);
    row("Suboptimal", report.suboptimal.psd_variance, report.suboptimal.agg_psd);
    row("Open-loop", report.open_loop.psd_variance, report.open_loop.agg_psd);

    section("Overshoot (%)", "average");
    auto pct_row = [&](const std::string& label, const ConfigMetrics& m) {
        out << fixed_width(label, label_w);
        for (Index c = 0; c < m.overshoot_pct.size(); ++c) {
            out << fixed_width(fix3(m.overshoot_pct(c)), cell_w);
        }
        out << fix3(m.agg_overshoot) << '\n';
    };
    pct_row("Optimal", report.optimal);
    pct_row("Suboptimal", report.suboptimal);
    pct_row("Open-loop", report.open_loop);

    section("Settling Time (s)", "max");
    auto settle_row = [&](const std::string& label, const ConfigMetrics& m) {
        out << fixed_width(label, label_w);
        for (Index c = 0; c < m.settling_time.size(); ++c) {
            out << fixed_width(settling_cell(m.settling_time(c),
                                             m.settled[static_cast<std::size_t>(c)],
                                             report.horizon),
                               cell_w);
        }
        out << settling_cell(m.agg_settling, m.agg_settled, report.horizon) << '\n';
    };
    settle_row("Optimal", report.optimal);
    settle_row("Suboptimal", report.suboptimal);
    settle_row("Open-loop", report.open_loop);

    section("Control Effort (integral of u^2 dt)", "sum");
    auto effort_row = [&](const std::string& label, const ConfigMetrics& m) {
        out << fixed_width(label, label_w);
        for (Index c = 0; c < m.effort.size(); ++c) {
            out << fixed_width(sci(m.effort(c)), cell_w);
        }
        out << sci(m.agg_effort) << '\n';
    };
    effort_row("Optimal", report.optimal);
    effort_row("Suboptimal", report.suboptimal);
    effort_row("Open-loop", report.open_loop);

    return out.str();
}

}  // namespace dmdplace
