#include "maxstab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace maxstab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw ParseError(origin + ": " + message);
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        fail(origin, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what());
    }
}

double entry_to_double(const json& j, const std::string& origin, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        fail(origin, where + ": unrecognized entry \"" + s +
                         "\"; use numbers, \"inf\" or \"-inf\"");
    }
    fail(origin, where + ": expected a number or an infinity string");
}

json double_to_entry(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

std::vector<std::vector<double>> parse_rows(const json& j, const std::string& origin,
                                            const std::string& where) {
    if (!j.is_array() || j.empty()) fail(origin, where + ": expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < j.size(); ++r) {
        const json& row = j[r];
        const std::string row_where = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.empty()) {
            fail(origin, row_where + ": expected a nonempty row");
        }
        std::vector<double> values;
        for (std::size_t c = 0; c < row.size(); ++c) {
            values.push_back(entry_to_double(
                row[c], origin, row_where + "[" + std::to_string(c) + "]"));
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

SemiringMatrix parse_matrix(const json& j, Algebra algebra, int rows, int cols,
                            const std::string& origin, const std::string& where) {
    const auto data = parse_rows(j, origin, where);
    if (static_cast<int>(data.size()) != rows ||
        static_cast<int>(data.front().size()) != cols) {
        fail(origin, where + ": expected a " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " matrix, got " +
                         std::to_string(data.size()) + "x" +
                         std::to_string(data.front().size()));
    }
    try {
        return SemiringMatrix::from_rows(data, algebra);
    } catch (const Error& e) {
        fail(origin, where + ": " + e.what());
    }
}

json matrix_to_json(const SemiringMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(double_to_entry(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

int require_positive_int(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number_integer() || j.get<int>() <= 0) {
        fail(origin, where + ": expected a positive integer");
    }
    return j.get<int>();
}

const json& require_field(const json& j, const char* name, const std::string& origin) {
    const auto it = j.find(name);
    if (it == j.end()) fail(origin, std::string("missing field \"") + name + "\"");
    return *it;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << text;
}

std::string csv_value(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SystemFile parse_system_text(const std::string& text, const std::string& origin) {
    const json j = parse_json(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");

    const auto algebra_field = require_field(j, "algebra", origin);
    if (!algebra_field.is_string()) fail(origin, "\"algebra\" must be a string");
    const auto algebra_text = algebra_field.get<std::string>();
    Algebra algebra;
    if (algebra_text == "max-plus") {
        algebra = Algebra::MaxPlus;
    } else if (algebra_text == "max-product") {
        algebra = Algebra::MaxProduct;
    } else {
        fail(origin, "\"algebra\" must be \"max-plus\" or \"max-product\", got \"" +
                         algebra_text + "\"");
    }

    const int n = require_positive_int(require_field(j, "n", origin), origin, "\"n\"");
    const int modes =
        require_positive_int(require_field(j, "modes", origin), origin, "\"modes\"");

    const auto parse_family = [&](const char* name, int rows,
                                  int cols) -> std::vector<SemiringMatrix> {
        const json& field = require_field(j, name, origin);
        if (!field.is_array() || static_cast<int>(field.size()) != modes) {
            fail(origin, std::string("\"") + name + "\" must list one matrix per mode");
        }
        std::vector<SemiringMatrix> family;
        for (int m = 0; m < modes; ++m) {
            family.push_back(parse_matrix(field[m], algebra, rows, cols, origin,
                                          std::string("\"") + name + "\"[" +
                                              std::to_string(m) + "]"));
        }
        return family;
    };

    std::vector<SemiringMatrix> a = parse_family("A", n, n);

    std::optional<std::vector<SemiringMatrix>> b;
    if (j.contains("B")) {
        const json& field = j["B"];
        if (!field.is_array() || static_cast<int>(field.size()) != modes) {
            fail(origin, "\"B\" must list one matrix per mode");
        }
        const auto first = parse_rows(field[0], origin, "\"B\"[0]");
        const int input_dim = static_cast<int>(first.front().size());
        b = parse_family("B", n, input_dim);
    }

    std::optional<std::vector<SemiringMatrix>> c;
    if (j.contains("C")) {
        const json& field = j["C"];
        if (!field.is_array() || static_cast<int>(field.size()) != modes) {
            fail(origin, "\"C\" must list one matrix per mode");
        }
        const auto first = parse_rows(field[0], origin, "\"C\"[0]");
        const int output_dim = static_cast<int>(first.size());
        c = parse_family("C", output_dim, n);
    }

    std::vector<std::vector<double>> chain_rows;
    if (j.contains("chain")) {
        chain_rows = parse_rows(j["chain"], origin, "\"chain\"");
    } else if (modes == 1) {
        chain_rows = {{1.0}};
    } else {
        fail(origin, "missing field \"chain\"");
    }

    try {
        MarkovChain chain(chain_rows);
        if (chain.mode_count() != modes) {
            fail(origin, "\"chain\" must be " + std::to_string(modes) + "x" +
                             std::to_string(modes));
        }
        JumpLinearSystem system(algebra, std::move(a), std::move(b), std::move(c));
        return SystemFile{std::move(system), std::move(chain)};
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(origin, e.what());
    }
}

SystemFile load_system_file(const std::filesystem::path& path) {
    return parse_system_text(read_file(path), path.string());
}

std::string system_to_text(const JumpLinearSystem& sys, const MarkovChain& chain) {
    json j;
    j["algebra"] = algebra_name(sys.algebra());
    j["n"] = sys.state_dim();
    j["modes"] = sys.mode_count();
    json a = json::array();
    for (int m = 1; m <= sys.mode_count(); ++m) a.push_back(matrix_to_json(sys.system_matrix(m)));
    j["A"] = std::move(a);
    if (sys.has_input()) {
        json b = json::array();
        for (int m = 1; m <= sys.mode_count(); ++m) b.push_back(matrix_to_json(sys.input_matrix(m)));
        j["B"] = std::move(b);
    }
    if (sys.has_output()) {
        json c = json::array();
        for (int m = 1; m <= sys.mode_count(); ++m) c.push_back(matrix_to_json(sys.output_matrix(m)));
        j["C"] = std::move(c);
    }
    json chain_rows = json::array();
    for (int i = 1; i <= chain.mode_count(); ++i) {
        const auto row = chain.row(i);
        chain_rows.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    j["chain"] = std::move(chain_rows);
    return j.dump(2) + "\n";
}

void save_system_file(const std::filesystem::path& path, const JumpLinearSystem& sys,
                      const MarkovChain& chain) {
    write_file(path, system_to_text(sys, chain));
}

CertificateFile parse_certificate_text(const std::string& text, const std::string& origin) {
    const json j = parse_json(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");

    CertificateFile file;
    file.certificate.k0 =
        j.contains("k0") ? require_positive_int(j["k0"], origin, "\"k0\"") : 1;

    const json& p = require_field(j, "p", origin);
    if (!p.is_array() || p.empty()) fail(origin, "\"p\" must list one vector per mode");
    for (std::size_t m = 0; m < p.size(); ++m) {
        const std::string where = "\"p\"[" + std::to_string(m) + "]";
        if (!p[m].is_array() || p[m].empty()) fail(origin, where + ": expected a vector");
        std::vector<double> vec;
        for (std::size_t s = 0; s < p[m].size(); ++s) {
            vec.push_back(entry_to_double(p[m][s], origin,
                                          where + "[" + std::to_string(s) + "]"));
        }
        file.certificate.p.push_back(std::move(vec));
    }

    if (j.contains("delta")) {
        const json& delta = j["delta"];
        if (!delta.is_array()) fail(origin, "\"delta\" must be an array");
        for (std::size_t m = 0; m < delta.size(); ++m) {
            file.certificate.delta.push_back(entry_to_double(
                delta[m], origin, "\"delta\"[" + std::to_string(m) + "]"));
        }
    }

    if (j.contains("gamma")) {
        if (!j["gamma"].is_number()) fail(origin, "\"gamma\" must be a number");
        file.gamma = j["gamma"].get<double>();
    }
    return file;
}

CertificateFile load_certificate_file(const std::filesystem::path& path) {
    return parse_certificate_text(read_file(path), path.string());
}

std::string certificate_to_text(const Certificate& cert, std::optional<double> gamma) {
    json j;
    j["k0"] = cert.k0;
    j["p"] = cert.p;
    j["delta"] = cert.delta;
    if (gamma) j["gamma"] = *gamma;
    return j.dump(2) + "\n";
}

void save_certificate_file(const std::filesystem::path& path, const Certificate& cert,
                           std::optional<double> gamma) {
    write_file(path, certificate_to_text(cert, gamma));
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    const int n = trace.states.empty() ? 0 : static_cast<int>(trace.states.front().size());
    const int m = trace.inputs.empty() ? 0 : static_cast<int>(trace.inputs.front().size());
    const int q = trace.outputs.empty() ? 0 : static_cast<int>(trace.outputs.front().size());

    os << "k,mode";
    for (int i = 1; i <= n; ++i) os << ",x_" << i;
    for (int i = 1; i <= m; ++i) os << ",u_" << i;
    for (int i = 1; i <= q; ++i) os << ",z_" << i;
    os << "\n";

    for (std::size_t k = 0; k < trace.states.size(); ++k) {
        os << k << "," << trace.modes.modes[k];
        for (double v : trace.states[k]) os << "," << csv_value(v);
        if (!trace.inputs.empty()) {
            for (double v : trace.inputs[k]) os << "," << csv_value(v);
        }
        if (!trace.outputs.empty()) {
            for (double v : trace.outputs[k]) os << "," << csv_value(v);
        }
        os << "\n";
    }
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

}  // namespace maxstab
