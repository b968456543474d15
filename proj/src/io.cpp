#include "bornsim/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "bornsim/errors.hpp"

namespace bornsim::io {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        // ':' and ';' are separators in their own right.
        std::string spaced;
        for (char c : raw) {
            if (c == ':' || c == ';') {
                spaced += ' ';
                spaced += c;
                spaced += ' ';
            } else {
                spaced += c;
            }
        }
        std::istringstream ss(spaced);
        Line line{number, {}};
        for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

double to_real(const Line& line, const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        fail(line.number, "expected a number, got '" + token + "'");
    }
    if (used != token.size()) fail(line.number, "expected a number, got '" + token + "'");
    return value;
}

long long to_integer(const Line& line, const std::string& token) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(token, &used);
    } catch (const std::exception&) {
        fail(line.number, "expected an integer, got '" + token + "'");
    }
    if (used != token.size()) fail(line.number, "expected an integer, got '" + token + "'");
    return value;
}

std::size_t to_count(const Line& line, const std::string& token) {
    const long long value = to_integer(line, token);
    if (value < 0) fail(line.number, "expected a non-negative integer, got '" + token + "'");
    return static_cast<std::size_t>(value);
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    return in;
}

std::ostream& precise(std::ostream& out) { return out << std::setprecision(17); }

}  // namespace

FockStateVector read_fock_fixture(std::istream& in) {
    std::optional<std::size_t> dim;
    unsigned max_total = FockSpace::kDefaultMaxTotal;
    std::optional<std::vector<std::size_t>> accessible;
    std::vector<std::pair<Line, std::pair<Occupations, Complex>>> terms;

    for (const Line& line : tokenize(in)) {
        const std::string& key = line.tokens[0];
        if (key == "single_particle_dim") {
            if (line.tokens.size() != 2) fail(line.number, "single_particle_dim takes one value");
            dim = to_count(line, line.tokens[1]);
        } else if (key == "max_total") {
            if (line.tokens.size() != 2) fail(line.number, "max_total takes one value");
            max_total = static_cast<unsigned>(to_count(line, line.tokens[1]));
        } else if (key == "accessible") {
            accessible.emplace();
            for (std::size_t i = 1; i < line.tokens.size(); ++i) accessible->push_back(to_count(line, line.tokens[i]));
        } else if (key == "term") {
            if (!dim) fail(line.number, "term before single_particle_dim");
            if (line.tokens.size() != *dim + 4 || line.tokens[*dim + 1] != ":") {
                fail(line.number, "term needs " + std::to_string(*dim) + " occupations, ':' and re im");
            }
            Occupations occ;
            for (std::size_t i = 0; i < *dim; ++i) occ.push_back(static_cast<unsigned>(to_count(line, line.tokens[1 + i])));
            const Complex amp(to_real(line, line.tokens[*dim + 2]), to_real(line, line.tokens[*dim + 3]));
            terms.push_back({line, {std::move(occ), amp}});
        } else {
            fail(line.number, "unknown directive '" + key + "'");
        }
    }
    if (!dim) throw Error(ErrorCode::ParseError, "missing single_particle_dim");
    if (!accessible) throw Error(ErrorCode::ParseError, "missing accessible");

    std::shared_ptr<const FockSpace> space;
    try {
        space = FockSpace::make(AccessibilityPartition(*dim, *accessible), max_total);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    FockStateVector psi(space);
    for (const auto& [line, term] : terms) {
        try {
            psi.add(term.first, term.second);
        } catch (const Error& e) {
            fail(line.number, e.what());
        }
    }
    return psi;
}

FockStateVector read_fock_fixture(const std::filesystem::path& path) {
    auto in = open(path);
    return read_fock_fixture(in);
}

void write_fock_fixture(std::ostream& out, const FockStateVector& psi) {
    const FockSpace& space = psi.space();
    precise(out) << "single_particle_dim " << space.single_particle_dim() << "\n";
    out << "max_total " << space.max_total() << "\n";
    out << "accessible";
    for (auto i : space.partition().accessible()) out << ' ' << i;
    out << "\n";
    for (const auto& [occ, amp] : psi.terms()) {
        out << "term";
        for (auto n : occ) out << ' ' << n;
        out << " : " << amp.real() << ' ' << amp.imag() << "\n";
    }
}

ScatteringProcess read_process_table(std::istream& in) {
    std::string name = "custom";
    std::map<int, std::string> labels;
    ScatteringProcess::Rows rows;
    std::array<bool, 4> seen{};
    std::size_t last_line = 0;

    for (const Line& line : tokenize(in)) {
        last_line = line.number;
        const std::string& key = line.tokens[0];
        if (key == "name") {
            if (line.tokens.size() != 2) fail(line.number, "name takes one identifier");
            name = line.tokens[1];
        } else if (key == "label") {
            if (line.tokens.size() < 3) fail(line.number, "label needs an integer and a name");
            std::string text = line.tokens[2];
            for (std::size_t i = 3; i < line.tokens.size(); ++i) text += " " + line.tokens[i];
            labels[static_cast<int>(to_integer(line, line.tokens[1]))] = text;
        } else if (key == "row") {
            if (line.tokens.size() < 3 || line.tokens[2] != ":") fail(line.number, "expected 'row <r> : ...'");
            const std::size_t r = to_count(line, line.tokens[1]);
            if (r > 3) fail(line.number, "row index must be 0..3");
            if (seen[r]) fail(line.number, "row " + std::to_string(r) + " given twice");
            seen[r] = true;
            std::vector<std::string> group;
            const auto flush = [&] {
                if (group.size() != 4) fail(line.number, "each entry is <qubit_out> <label> <re> <im>");
                const std::size_t q = to_count(line, group[0]);
                if (q > 1) fail(line.number, "qubit_out must be 0 or 1");
                rows[r].push_back({static_cast<unsigned>(q), static_cast<int>(to_integer(line, group[1])),
                                   Complex(to_real(line, group[2]), to_real(line, group[3]))});
                group.clear();
            };
            for (std::size_t i = 3; i < line.tokens.size(); ++i) {
                if (line.tokens[i] == ";") {
                    flush();
                } else {
                    group.push_back(line.tokens[i]);
                }
            }
            flush();
        } else {
            fail(line.number, "unknown directive '" + key + "'");
        }
    }
    for (std::size_t r = 0; r < 4; ++r) {
        if (!seen[r]) throw Error(ErrorCode::ParseError, "row " + std::to_string(r) + " missing");
    }
    try {
        return ScatteringProcess(name, std::move(rows), std::move(labels));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotUnitary) throw;
        fail(last_line, e.what());
    }
}

ScatteringProcess read_process_table(const std::filesystem::path& path) {
    auto in = open(path);
    return read_process_table(in);
}

void write_process_table(std::ostream& out, const ScatteringProcess& process) {
    precise(out) << "name " << process.name() << "\n";
    for (const auto& [label, text] : process.label_names()) out << "label " << label << ' ' << text << "\n";
    for (std::size_t r = 0; r < 4; ++r) {
        out << "row " << r << " :";
        const auto& row = process.rows()[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << " ;";
            out << ' ' << row[i].qubit_out << ' ' << row[i].label << ' ' << row[i].amplitude.real() << ' '
                << row[i].amplitude.imag();
        }
        out << "\n";
    }
}

ProjectorSet read_projector_set(std::istream& in) {
    const std::vector<Line> lines = tokenize(in);
    std::optional<std::size_t> dim;
    std::vector<Matrix> projectors;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const std::string& key = line.tokens[0];
        if (key == "dim") {
            if (line.tokens.size() != 2) fail(line.number, "dim takes one value");
            dim = to_count(line, line.tokens[1]);
            if (*dim == 0) fail(line.number, "dim must be positive");
        } else if (key == "projector") {
            if (!dim) fail(line.number, "projector before dim");
            const auto d = static_cast<Eigen::Index>(*dim);
            Matrix p(d, d);
            for (Eigen::Index row = 0; row < d; ++row) {
                if (i + 1 >= lines.size()) fail(line.number, "projector block is truncated");
                const Line& data = lines[++i];
                if (data.tokens.size() != 2 * *dim) {
                    fail(data.number, "matrix row needs " + std::to_string(2 * *dim) + " numbers (re im pairs)");
                }
                for (Eigen::Index col = 0; col < d; ++col) {
                    const auto c = static_cast<std::size_t>(col);
                    p(row, col) = Complex(to_real(data, data.tokens[2 * c]), to_real(data, data.tokens[2 * c + 1]));
                }
            }
            projectors.push_back(std::move(p));
        } else {
            fail(line.number, "unknown directive '" + key + "'");
        }
    }
    if (!dim) throw Error(ErrorCode::ParseError, "missing dim");
    ProjectorSet set(*dim, std::move(projectors));
    validate(set);
    return set;
}

ProjectorSet read_projector_set(const std::filesystem::path& path) {
    auto in = open(path);
    return read_projector_set(in);
}

void write_projector_set(std::ostream& out, const ProjectorSet& set) {
    precise(out) << "dim " << set.dim() << "\n";
    for (const Matrix& p : set.projectors()) {
        out << "projector\n";
        for (Eigen::Index r = 0; r < p.rows(); ++r) {
            for (Eigen::Index c = 0; c < p.cols(); ++c) {
                out << (c > 0 ? " " : "") << p(r, c).real() << ' ' << p(r, c).imag();
            }
            out << "\n";
        }
    }
}

}  // namespace bornsim::io
