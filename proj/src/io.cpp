#include "hawkes/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hawkes {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

json parse_line(const std::string& line, const std::string& context) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw std::runtime_error("malformed record at " + context + ": " + line);
    }
    return j;
}

std::string vector_json(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out + "]";
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trace(std::ostream& out, const EpochTrace& trace, int epoch_index,
                 std::uint64_t seed) {
    out << "{\"horizon\": " << format_double(trace.horizon) << ", \"epoch\": " << epoch_index
        << ", \"seed\": " << seed << "}\n";
    for (const SessionRecord& s : trace.sessions) {
        out << "{\"t\": " << format_double(s.t) << ", \"items\": [";
        for (std::size_t i = 0; i < s.items.size(); ++i) {
            if (i) out << ", ";
            out << s.items[i];
        }
        out << "]}\n";
    }
}

EpochTrace read_trace(std::istream& in, int* epoch_index, std::uint64_t* seed) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace: missing header line");
    const json header = parse_line(line, "trace header");
    if (!header.contains("horizon")) throw std::runtime_error("trace: header lacks horizon");
    EpochTrace trace;
    trace.horizon = header["horizon"].get<double>();
    if (epoch_index && header.contains("epoch")) *epoch_index = header["epoch"].get<int>();
    if (seed && header.contains("seed")) *seed = header["seed"].get<std::uint64_t>();
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json rec = parse_line(line, "trace line " + std::to_string(line_no));
        if (!rec.contains("t") || !rec.contains("items")) {
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": missing t or items");
        }
        SessionRecord s;
        s.t = rec["t"].get<double>();
        for (const auto& item : rec["items"]) s.items.push_back(item.get<int>());
        trace.sessions.push_back(std::move(s));
    }
    return trace;
}

void write_trace_file(const std::string& path, const EpochTrace& trace, int epoch_index,
                      std::uint64_t seed) {
    auto out = open_output(path);
    write_trace(out, trace, epoch_index, seed);
}

EpochTrace read_trace_file(const std::string& path, int* epoch_index, std::uint64_t* seed) {
    auto in = open_input(path);
    try {
        return read_trace(in, epoch_index, seed);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_catalog(std::ostream& out, const ItemCatalog& catalog) {
    out << catalog.dim() << ' ' << catalog.count() << '\n';
    for (int i = 0; i < catalog.count(); ++i) {
        for (int j = 0; j < catalog.dim(); ++j) {
            if (j) out << ' ';
            out << format_double(catalog.vectors()(i, j));
        }
        out << '\n';
    }
}

ItemCatalog read_catalog(std::istream& in) {
    int d = 0, m = 0;
    if (!(in >> d >> m) || d < 1 || m < 1) {
        throw std::runtime_error("catalog: malformed header (expected \"d m\")");
    }
    Eigen::MatrixXd vectors(m, d);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            if (!(in >> vectors(i, j))) {
                throw std::runtime_error("catalog: truncated at row " + std::to_string(i));
            }
        }
    }
    return ItemCatalog(std::move(vectors));
}

void write_catalog_file(const std::string& path, const ItemCatalog& catalog) {
    auto out = open_output(path);
    write_catalog(out, catalog);
}

ItemCatalog read_catalog_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_catalog(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string params_to_json(const ModelParams& params) {
    std::ostringstream out;
    out << "{\"mu\": " << format_double(params.mu)
        << ", \"beta1\": " << format_double(params.beta1)
        << ", \"beta2\": " << format_double(params.beta2) << ", \"u1\": " << vector_json(params.u1)
        << ", \"u2\": " << vector_json(params.u2) << "}";
    return out.str();
}

ModelParams params_from_json(const std::string& text) {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw std::runtime_error("params: malformed JSON");
    for (const char* key : {"mu", "beta1", "beta2", "u1", "u2"}) {
        if (!j.contains(key)) throw std::runtime_error(std::string("params: missing ") + key);
    }
    ModelParams params;
    params.mu = j["mu"].get<double>();
    params.beta1 = j["beta1"].get<double>();
    params.beta2 = j["beta2"].get<double>();
    params.u1 = vector_from_json(j["u1"]);
    params.u2 = vector_from_json(j["u2"]);
    return params;
}

void write_params_file(const std::string& path, const ModelParams& params) {
    open_output(path) << params_to_json(params) << '\n';
}

ModelParams read_params_file(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return params_from_json(buf.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_fit_report(std::ostream& out, const FitReport& report) {
    out << "{\n  \"params\": " << params_to_json(report.params) << ",\n";
    out << "  \"steps_taken\": " << report.steps_taken << ",\n";
    out << "  \"converged\": " << (report.converged ? "true" : "false") << ",\n";
    out << "  \"beta_tie_warning\": " << (report.beta_tie_warning ? "true" : "false") << ",\n";
    out << "  \"non_monotone\": " << (report.non_monotone_flag ? "true" : "false") << ",\n";
    if (report.errors) {
        const ParamErrors& e = *report.errors;
        out << "  \"errors\": {\"mu\": " << format_double(e.mu)
            << ", \"beta1\": " << format_double(e.beta1)
            << ", \"beta2\": " << format_double(e.beta2) << ", \"u1\": " << format_double(e.u1)
            << ", \"u2\": " << format_double(e.u2) << "},\n";
    }
    out << "  \"final_objective\": "
        << format_double(report.trajectory.empty() ? 0.0 : report.trajectory.back()) << ",\n";
    out << "  \"trajectory\": [";
    for (std::size_t i = 0; i < report.trajectory.size(); ++i) {
        if (i) out << ", ";
        out << format_double(report.trajectory[i]);
    }
    out << "]\n}\n";
}

void write_fit_report_file(const std::string& path, const FitReport& report) {
    auto out = open_output(path);
    write_fit_report(out, report);
}

}  // namespace hawkes
