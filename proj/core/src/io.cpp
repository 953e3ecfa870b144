#include "graphlim/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphlim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

json measure_to_value(const DiscreteMeasure& m) {
    json atoms = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json point = json::array();
        for (int c = 0; c < m.dim(); ++c) point.push_back(m.coord(i, c));
        atoms.push_back(std::move(point));
    }
    return json{{"dim", m.dim()}, {"atoms", std::move(atoms)}, {"weights", m.weights()}};
}

DiscreteMeasure measure_from_value(const json& v) {
    if (!v.is_object() || !v.contains("dim")) fail("measure JSON must be {dim, atoms, weights}");
    const int dim = v.at("dim").get<int>();
    std::vector<std::vector<double>> atoms;
    for (const auto& point : v.at("atoms")) atoms.push_back(point.get<std::vector<double>>());
    return DiscreteMeasure(dim, atoms, v.at("weights").get<std::vector<double>>());
}

std::vector<std::vector<double>> matrix_from_value(const json& v) {
    if (!v.is_array()) fail("matrix JSON must be a 2-D array");
    std::vector<std::vector<double>> m;
    for (const auto& row : v) m.push_back(row.get<std::vector<double>>());
    return m;
}

EdgeDecoration decoration_from_value(const json& v) {
    const std::string kind = v.at("kind").get<std::string>();
    if (kind == "const") return EdgeDecoration::constant(v.at("c").get<double>());
    if (kind == "identity") {
        const auto range = v.at("range").get<std::vector<double>>();
        if (range.size() != 2) fail("identity decoration: range must be [lo, hi]");
        return EdgeDecoration::identity(range[0], range[1]);
    }
    if (kind == "poly") {
        const auto range = v.at("range").get<std::vector<double>>();
        if (range.size() != 2) fail("poly decoration: range must be [lo, hi]");
        return EdgeDecoration::poly(v.at("coeffs").get<std::vector<double>>(), range[0], range[1]);
    }
    if (kind == "indicator")
        return EdgeDecoration::indicator(v.at("value").get<double>(),
                                         v.value("tol", 0.0));
    if (kind == "bounded_lipschitz") {
        std::vector<std::pair<double, double>> table;
        for (const auto& row : v.at("table")) {
            const auto pair = row.get<std::vector<double>>();
            if (pair.size() != 2) fail("bounded_lipschitz decoration: table rows are [x, y]");
            table.emplace_back(pair[0], pair[1]);
        }
        return EdgeDecoration::bounded_lipschitz(std::move(table));
    }
    fail("unknown decoration kind '" + kind + "'");
}

}  // namespace

std::string measure_to_json(const DiscreteMeasure& m) { return measure_to_value(m).dump(); }

DiscreteMeasure measure_from_json(const std::string& text) {
    return measure_from_value(json::parse(text));
}

std::string kernel_to_json(const StepPVariable& w) {
    json cells = json::array();
    for (int i = 0; i < w.n(); ++i) {
        json row = json::array();
        for (int j = 0; j < w.n(); ++j) row.push_back(measure_to_value(w.cell(i, j)));
        cells.push_back(std::move(row));
    }
    return json{{"n", w.n()}, {"cells", std::move(cells)}}.dump();
}

StepPVariable kernel_from_json(const std::string& text) {
    const json v = json::parse(text);
    const int n = v.at("n").get<int>();
    std::vector<DiscreteMeasure> cells;
    for (const auto& row : v.at("cells"))
        for (const auto& cell : row) cells.push_back(measure_from_value(cell));
    return StepPVariable(n, std::move(cells));
}

std::string matrix_to_csv(const std::vector<std::vector<double>>& m) {
    std::string out;
    char buf[64];
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out += buf;
            if (j + 1 < row.size()) out += ',';
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<double>> matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> m;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
        m.push_back(std::move(row));
    }
    return m;
}

DecoratedGraph decorated_graph_from_json(const std::string& text) {
    const json v = json::parse(text);
    const int vertices = v.at("vertices").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : v.at("edges")) {
        const auto pair = e.get<std::vector<int>>();
        if (pair.size() != 2) fail("edges must be pairs");
        edges.emplace_back(pair[0], pair[1]);
    }
    std::vector<EdgeDecoration> beta;
    for (const auto& b : v.at("beta")) beta.push_back(decoration_from_value(b));
    std::vector<double> alpha;
    if (v.contains("alpha")) alpha = v.at("alpha").get<std::vector<double>>();
    return DecoratedGraph(vertices, std::move(edges), std::move(beta), std::move(alpha));
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
    const json v = json::parse(text);
    ExperimentSpec spec;
    spec.generator = v.at("generator").get<std::string>();
    spec.params = v.value("params", std::vector<double>{});
    spec.sizes = v.at("sizes").get<std::vector<int>>();
    if (!v.contains("seed")) fail("experiment spec: seed is mandatory");
    spec.seed = v.at("seed").get<std::uint64_t>();
    const auto& ref = v.at("reference");
    if (ref.contains("file")) {
        spec.reference = load_pvariable(ref.at("file").get<std::string>());
    } else {
        spec.reference_generator = ref.at("generator").get<std::string>();
        spec.reference_params = ref.value("params", std::vector<double>{});
    }
    spec.metrics = v.at("metrics").get<std::vector<std::string>>();
    spec.k_max = v.value("k_max", 2);
    spec.strategy = parse_strategy(v.value("strategy", std::string("exhaustive")), spec.seed);
    spec.repeats = v.value("repeats", 1);
    spec.dm_slack = v.value("dm_slack", 0.1);
    spec.real_cut_slack = v.value("real_cut_slack", 0.05);
    spec.threads = v.value("threads", 0);
    spec.timings = v.value("timings", false);
    return spec;
}

StepPVariable load_pvariable(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return from_matrix(matrix_from_csv(text));
    const json v = json::parse(text);
    if (v.is_array()) return from_matrix(matrix_from_value(v));
    if (v.contains("cells")) return kernel_from_json(text);
    fail("cannot interpret '" + path + "' as a matrix or kernel");
}

DiscreteMeasure load_measure(const std::string& path) {
    return measure_from_json(read_file(path));
}

RealKernel load_kernel_matrix(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::vector<double>> m;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        m = matrix_from_csv(text);
    } else {
        m = matrix_from_value(json::parse(text));
    }
    const int n = static_cast<int>(m.size());
    std::vector<double> values;
    for (const auto& row : m) {
        if (static_cast<int>(row.size()) != n) fail("kernel matrix must be square");
        values.insert(values.end(), row.begin(), row.end());
    }
    return RealKernel(n, std::move(values));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write '" + path + "'");
    out << content;
}

SearchStrategy parse_strategy(const std::string& text, std::uint64_t seed) {
    if (text == "exhaustive") return SearchStrategy::exhaustive();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    int m = 64;
    if (colon != std::string::npos) m = std::stoi(text.substr(colon + 1));
    if (head == "random") return SearchStrategy::random(m, seed);
    if (head == "local") return SearchStrategy::local_search(m, seed);
    fail("unknown strategy '" + text + "' (want exhaustive, random:M, or local:M)");
}

}  // namespace graphlim
