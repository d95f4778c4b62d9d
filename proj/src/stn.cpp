#include "moeadstn/stn.hpp"

#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

#include "moeadstn/errors.hpp"
#include "moeadstn/io.hpp"
#include "moeadstn/metrics.hpp"
#include "moeadstn/text.hpp"

namespace moeadstn {

namespace {

bool better_representative(double agg, std::size_t tick, double best_agg, std::size_t best_tick) {
    return agg < best_agg || (agg == best_agg && tick > best_tick);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string xml_unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        const std::size_t semi = s.find(';', i);
        const std::string_view ent = s.substr(i, semi - i + 1);
        if (ent == "&amp;") out += '&';
        else if (ent == "&lt;") out += '<';
        else if (ent == "&gt;") out += '>';
        else if (ent == "&quot;") out += '"';
        else if (ent == "&apos;") out += '\'';
        else throw ConfigError("unsupported XML entity " + std::string(ent));
        i = semi;
    }
    return out;
}

const char* flag(bool b) { return b ? "true" : "false"; }

std::size_t count_value(const std::string& text, const std::string& what) {
    auto v = parse_integer(text);
    if (!v || *v < 0) {
        throw ConfigError("graphml: bad " + what + " value '" + text + "'");
    }
    return static_cast<std::size_t>(*v);
}

bool bool_value(const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("graphml: bad boolean '" + text + "'");
}

std::map<std::string, std::string> tag_attributes(const std::string& tag) {
    static const std::regex attr(R"re(([A-Za-z_:][-\w:.]*)\s*=\s*"([^"]*)")re");
    std::map<std::string, std::string> out;
    for (auto it = std::sregex_iterator(tag.begin(), tag.end(), attr); it != std::sregex_iterator(); ++it) {
        out[(*it)[1].str()] = xml_unescape((*it)[2].str());
    }
    return out;
}

} // namespace

LocationId locate(std::span<const double> x, double precision) {
    if (!(precision > 0.0)) {
        throw InputError("precision must be positive");
    }
    LocationId cell(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        cell[d] = static_cast<std::int32_t>(std::floor(x[d] / precision));
    }
    return cell;
}

std::string cell_key(const LocationId& cell) {
    std::string out;
    for (std::size_t d = 0; d < cell.size(); ++d) {
        if (d > 0) {
            out += ':';
        }
        out += std::to_string(cell[d]);
    }
    return out;
}

LocationId parse_cell_key(std::string_view key) {
    LocationId cell;
    if (key.empty()) {
        return cell;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = key.find(':', start);
        const auto part = key.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start);
        auto v = parse_integer(part);
        if (!v) {
            throw InputError("bad cell key '" + std::string(key) + "'");
        }
        cell.push_back(static_cast<std::int32_t>(*v));
        if (colon == std::string_view::npos) {
            return cell;
        }
        start = colon + 1;
    }
}

std::vector<WeightVector> stn_weights(std::size_t n, std::size_t m) {
    if (n < 2) {
        throw InputError("at least two tracking vectors are required");
    }
    return generate_uniform_design(n, m);
}

std::vector<std::size_t> select_representatives(const Matrix& scaled, std::span<const std::size_t> birth_tick,
                                                const std::vector<WeightVector>& vectors,
                                                std::span<const double> z) {
    if (scaled.empty()) {
        throw InputError("representative selection needs a nonempty population");
    }
    if (birth_tick.size() != scaled.rows()) {
        throw InputError("one birth tick per population member is required");
    }
    std::vector<std::size_t> picks;
    picks.reserve(vectors.size());
    for (const auto& v : vectors) {
        std::size_t best = 0;
        double best_agg = aggregate_wt(scaled.row(0), v.weights, z);
        for (std::size_t r = 1; r < scaled.rows(); ++r) {
            const double agg = aggregate_wt(scaled.row(r), v.weights, z);
            if (better_representative(agg, birth_tick[r], best_agg, birth_tick[best])) {
                best = r;
                best_agg = agg;
            }
        }
        picks.push_back(best);
    }
    return picks;
}

std::vector<Solution> select_representatives(const std::vector<Solution>& population,
                                             const std::vector<WeightVector>& vectors, std::span<const double> z) {
    Matrix f;
    std::vector<std::size_t> ticks;
    for (const auto& s : population) {
        f.append_row(s.objectives);
        ticks.push_back(s.birth_tick);
    }
    std::vector<Solution> out;
    for (std::size_t r : select_representatives(f, ticks, vectors, z)) {
        out.push_back(population[r]);
    }
    return out;
}

std::vector<Trajectory> extract_trajectories(const RunTrace& trace, const std::vector<WeightVector>& vectors,
                                             std::size_t run, const TrajectoryOptions& options,
                                             const Matrix* reference_front) {
    std::vector<Trajectory> out(vectors.size());
    for (std::size_t v = 0; v < vectors.size(); ++v) {
        out[v].run = run;
        out[v].vector = v;
        out[v].steps.reserve(trace.iterations.size());
    }
    ScalingFrame frame;
    Matrix scaled_front;
    if (reference_front != nullptr && !reference_front->empty()) {
        frame = scaling_frame(std::span<const Matrix>(reference_front, 1));
        scaled_front = apply_frame(*reference_front, frame);
    }
    const double tol2 = options.optimal_tolerance * options.optimal_tolerance;
    auto near_front = [&](std::span<const double> f) {
        if (scaled_front.empty()) {
            return false;
        }
        std::vector<double> p(f.size());
        for (std::size_t c = 0; c < f.size(); ++c) {
            const double range = frame.upper[c] - frame.lower[c];
            p[c] = range > 0.0 ? (f[c] - frame.lower[c]) / range : 0.0;
        }
        for (std::size_t r = 0; r < scaled_front.rows(); ++r) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < p.size(); ++c) {
                const double d = p[c] - scaled_front(r, c);
                d2 += d * d;
            }
            if (d2 <= tol2) {
                return true;
            }
        }
        return false;
    };

    for (const auto& snap : trace.iterations) {
        const std::vector<double> z(snap.scaled_objectives.cols(), 0.0);
        const auto reps = select_representatives(snap.scaled_objectives, snap.birth_tick, vectors, z);
        for (std::size_t v = 0; v < vectors.size(); ++v) {
            const std::size_t r = reps[v];
            TrajectoryStep step;
            step.iteration = snap.iteration;
            step.cell = locate(snap.x.row(r), options.precision);
            step.agg_value = aggregate_wt(snap.scaled_objectives.row(r), vectors[v].weights, z);
            step.feasible = snap.violation[r] == 0.0;
            step.near_front = step.feasible && near_front(snap.objectives.row(r));
            out[v].steps.push_back(std::move(step));
        }
    }
    return out;
}

std::string to_string(Owner o) {
    switch (o) {
    case Owner::a: return "A";
    case Owner::b: return "B";
    case Owner::shared: return "shared";
    }
    return "?";
}

Owner parse_owner(std::string_view text) {
    if (text == "A") return Owner::a;
    if (text == "B") return Owner::b;
    if (text == "shared") return Owner::shared;
    throw InputError("unknown owner '" + std::string(text) + "'");
}

void add_trajectory(StnGraph& g, const Trajectory& t) {
    if (t.steps.empty()) {
        return;
    }
    ++g.trajectories;
    const LocationId* prev = nullptr;
    for (const auto& step : t.steps) {
        if (prev != nullptr && *prev == step.cell) {
            g.nodes[step.cell].is_optimal |= step.near_front;
            continue;
        }
        StnNode& node = g.nodes[step.cell];
        ++node.visits;
        ++node.visits_a;
        node.is_optimal |= step.near_front;
        if (prev != nullptr) {
            StnEdge& e = g.edges[{*prev, step.cell}];
            ++e.count;
            ++e.count_a;
        }
        prev = &step.cell;
    }
    g.nodes[t.steps.front().cell].is_start = true;
    g.nodes[t.steps.back().cell].is_end = true;
}

void accumulate(StnGraph& into, const StnGraph& from) {
    if (into.precision != from.precision) {
        throw InputError("cannot combine graphs built at different precisions");
    }
    into.trajectories += from.trajectories;
    for (const auto& [cell, n] : from.nodes) {
        StnNode& dst = into.nodes[cell];
        dst.visits += n.visits;
        dst.visits_a += n.visits_a;
        dst.visits_b += n.visits_b;
        dst.is_start |= n.is_start;
        dst.is_end |= n.is_end;
        dst.is_optimal |= n.is_optimal;
    }
    for (const auto& [key, e] : from.edges) {
        StnEdge& dst = into.edges[key];
        dst.count += e.count;
        dst.count_a += e.count_a;
        dst.count_b += e.count_b;
    }
}

StnGraph build_stn(std::span<const Trajectory> trajectories, double precision) {
    if (trajectories.empty()) {
        throw InputError("build_stn needs at least one trajectory");
    }
    StnGraph g;
    g.precision = precision;
    for (const auto& t : trajectories) {
        add_trajectory(g, t);
    }
    return g;
}

StnGraph build_stn(std::span<const RunTrace> traces, const std::vector<WeightVector>& vectors,
                   const TrajectoryOptions& options, const Matrix* reference_front) {
    if (traces.empty()) {
        throw InputError("build_stn needs at least one run trace");
    }
    StnGraph g;
    g.precision = options.precision;
    for (std::size_t run = 0; run < traces.size(); ++run) {
        for (const auto& t : extract_trajectories(traces[run], vectors, run, options, reference_front)) {
            add_trajectory(g, t);
        }
    }
    return g;
}

StnGraph merge_stn(const StnGraph& a, const StnGraph& b) {
    if (a.precision != b.precision) {
        throw InputError("cannot merge graphs built at different precisions");
    }
    StnGraph g;
    g.precision = a.precision;
    g.trajectories = a.trajectories + b.trajectories;
    for (const auto& [cell, n] : a.nodes) {
        StnNode& dst = g.nodes[cell];
        dst = n;
        dst.visits_a = n.visits;
        dst.visits_b = 0;
        dst.owner = Owner::a;
    }
    for (const auto& [cell, n] : b.nodes) {
        auto [it, fresh] = g.nodes.try_emplace(cell);
        StnNode& dst = it->second;
        dst.visits += n.visits;
        dst.visits_b = n.visits;
        dst.is_start |= n.is_start;
        dst.is_end |= n.is_end;
        dst.is_optimal |= n.is_optimal;
        dst.owner = fresh ? Owner::b : Owner::shared;
    }
    for (const auto& [key, e] : a.edges) {
        g.edges[key] = {e.count, e.count, 0, Owner::a};
    }
    for (const auto& [key, e] : b.edges) {
        auto [it, fresh] = g.edges.try_emplace(key);
        it->second.count += e.count;
        it->second.count_b = e.count;
        it->second.owner = fresh ? Owner::b : Owner::shared;
    }
    return g;
}

StnMetrics stn_metrics(const StnGraph& g) {
    StnMetrics m;
    m.nodes = g.nodes.size();
    m.edges = g.edges.size();
    for (const auto& [cell, n] : g.nodes) {
        if (n.owner == Owner::shared) {
            ++m.shared;
        }
    }
    return m;
}

void write_graphml(const StnGraph& g, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"precision\" for=\"graph\" attr.name=\"precision\" attr.type=\"double\"/>\n"
        << "  <key id=\"trajectories\" for=\"graph\" attr.name=\"trajectories\" attr.type=\"long\"/>\n"
        << "  <key id=\"cell\" for=\"node\" attr.name=\"cell\" attr.type=\"string\"/>\n"
        << "  <key id=\"visits\" for=\"node\" attr.name=\"visits\" attr.type=\"long\"/>\n"
        << "  <key id=\"visits_a\" for=\"node\" attr.name=\"visits_a\" attr.type=\"long\"/>\n"
        << "  <key id=\"visits_b\" for=\"node\" attr.name=\"visits_b\" attr.type=\"long\"/>\n"
        << "  <key id=\"start\" for=\"node\" attr.name=\"start\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"end\" for=\"node\" attr.name=\"end\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"optimal\" for=\"node\" attr.name=\"optimal\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"owner\" for=\"node\" attr.name=\"owner\" attr.type=\"string\"/>\n"
        << "  <key id=\"count\" for=\"edge\" attr.name=\"count\" attr.type=\"long\"/>\n"
        << "  <key id=\"count_a\" for=\"edge\" attr.name=\"count_a\" attr.type=\"long\"/>\n"
        << "  <key id=\"count_b\" for=\"edge\" attr.name=\"count_b\" attr.type=\"long\"/>\n"
        << "  <key id=\"edge_owner\" for=\"edge\" attr.name=\"owner\" attr.type=\"string\"/>\n"
        << "  <graph id=\"stn\" edgedefault=\"directed\">\n"
        << "    <data key=\"precision\">" << format_double(g.precision) << "</data>\n"
        << "    <data key=\"trajectories\">" << g.trajectories << "</data>\n";
    std::map<LocationId, std::size_t> ids;
    for (const auto& [cell, n] : g.nodes) {
        const std::size_t id = ids.size();
        ids.emplace(cell, id);
        out << "    <node id=\"n" << id << "\">"
            << "<data key=\"cell\">" << xml_escape(cell_key(cell)) << "</data>"
            << "<data key=\"visits\">" << n.visits << "</data>"
            << "<data key=\"visits_a\">" << n.visits_a << "</data>"
            << "<data key=\"visits_b\">" << n.visits_b << "</data>"
            << "<data key=\"start\">" << flag(n.is_start) << "</data>"
            << "<data key=\"end\">" << flag(n.is_end) << "</data>"
            << "<data key=\"optimal\">" << flag(n.is_optimal) << "</data>"
            << "<data key=\"owner\">" << to_string(n.owner) << "</data></node>\n";
    }
    for (const auto& [key, e] : g.edges) {
        out << "    <edge source=\"n" << ids.at(key.first) << "\" target=\"n" << ids.at(key.second) << "\">"
            << "<data key=\"count\">" << e.count << "</data>"
            << "<data key=\"count_a\">" << e.count_a << "</data>"
            << "<data key=\"count_b\">" << e.count_b << "</data>"
            << "<data key=\"edge_owner\">" << to_string(e.owner) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    write_text_file(path, out.str());
}

void write_dot(const StnGraph& g, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "digraph stn {\n"
        << "  graph [precision=" << format_double(g.precision) << ", trajectories=" << g.trajectories << "];\n";
    std::map<LocationId, std::size_t> ids;
    for (const auto& [cell, n] : g.nodes) {
        const std::size_t id = ids.size();
        ids.emplace(cell, id);
        out << "  n" << id << " [cell=\"" << cell_key(cell) << "\", visits=" << n.visits
            << ", visits_a=" << n.visits_a << ", visits_b=" << n.visits_b << ", start=" << flag(n.is_start)
            << ", end=" << flag(n.is_end) << ", optimal=" << flag(n.is_optimal) << ", owner=\""
            << to_string(n.owner) << "\"];\n";
    }
    for (const auto& [key, e] : g.edges) {
        out << "  n" << ids.at(key.first) << " -> n" << ids.at(key.second) << " [count=" << e.count
            << ", count_a=" << e.count_a << ", count_b=" << e.count_b << ", owner=\"" << to_string(e.owner)
            << "\"];\n";
    }
    out << "}\n";
    write_text_file(path, out.str());
}

StnGraph read_graphml(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    StnGraph g;
    std::map<std::string, LocationId> cells;
    std::vector<std::tuple<std::string, std::string, StnEdge>> pending;

    enum class Scope { none, graph, node, edge };
    Scope scope = Scope::none;
    std::string node_id;
    std::string edge_src, edge_dst;
    StnNode node;
    StnEdge edge;
    LocationId cell;
    bool have_cell = false;

    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t close = text.find('>', pos);
        if (close == std::string::npos) {
            throw ConfigError(path.string() + ": truncated XML");
        }
        const std::string tag = text.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') {
            continue;
        }
        const bool closing = tag[0] == '/';
        const bool self_closing = tag.back() == '/';
        const std::string name = tag.substr(closing ? 1 : 0, tag.find_first_of(" \t\n/", 1) - (closing ? 1 : 0));
        if (closing) {
            if (name == "node") {
                if (!have_cell) {
                    throw ConfigError(path.string() + ": node " + node_id + " has no cell");
                }
                cells[node_id] = cell;
                g.nodes[cell] = node;
                scope = Scope::graph;
            } else if (name == "edge") {
                pending.emplace_back(edge_src, edge_dst, edge);
                scope = Scope::graph;
            }
            continue;
        }
        const auto attrs = tag_attributes(tag);
        if (name == "graph") {
            scope = Scope::graph;
        } else if (name == "node") {
            scope = Scope::node;
            node_id = attrs.count("id") ? attrs.at("id") : "";
            node = StnNode{};
            have_cell = false;
            if (self_closing) {
                throw ConfigError(path.string() + ": node " + node_id + " has no cell");
            }
        } else if (name == "edge") {
            scope = Scope::edge;
            edge_src = attrs.count("source") ? attrs.at("source") : "";
            edge_dst = attrs.count("target") ? attrs.at("target") : "";
            edge = StnEdge{};
            if (self_closing) {
                pending.emplace_back(edge_src, edge_dst, edge);
                scope = Scope::graph;
            }
        } else if (name == "data" && !self_closing) {
            const std::size_t end = text.find("</data>", pos);
            if (end == std::string::npos) {
                throw ConfigError(path.string() + ": unterminated data element");
            }
            const std::string value = xml_unescape(std::string_view(text).substr(pos, end - pos));
            pos = end + 7;
            const std::string key = attrs.count("key") ? attrs.at("key") : "";
            if (scope == Scope::graph) {
                if (key == "precision") {
                    auto p = parse_double(value);
                    if (!p) {
                        throw ConfigError(path.string() + ": bad precision");
                    }
                    g.precision = *p;
                } else if (key == "trajectories") {
                    g.trajectories = count_value(value, key);
                }
            } else if (scope == Scope::node) {
                if (key == "cell") {
                    cell = parse_cell_key(value);
                    have_cell = true;
                } else if (key == "visits") {
                    node.visits = count_value(value, key);
                } else if (key == "visits_a") {
                    node.visits_a = count_value(value, key);
                } else if (key == "visits_b") {
                    node.visits_b = count_value(value, key);
                } else if (key == "start") {
                    node.is_start = bool_value(value);
                } else if (key == "end") {
                    node.is_end = bool_value(value);
                } else if (key == "optimal") {
                    node.is_optimal = bool_value(value);
                } else if (key == "owner") {
                    node.owner = parse_owner(value);
                }
            } else if (scope == Scope::edge) {
                if (key == "count") {
                    edge.count = count_value(value, key);
                } else if (key == "count_a") {
                    edge.count_a = count_value(value, key);
                } else if (key == "count_b") {
                    edge.count_b = count_value(value, key);
                } else if (key == "edge_owner") {
                    edge.owner = parse_owner(value);
                }
            }
        }
    }
    for (const auto& [src, dst, e] : pending) {
        auto s = cells.find(src);
        auto d = cells.find(dst);
        if (s == cells.end() || d == cells.end()) {
            throw ConfigError(path.string() + ": edge refers to an unknown node");
        }
        g.edges[{s->second, d->second}] = e;
    }
    return g;
}

void write_trajectories_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories) {
    std::string out = "run,vector,iteration,cell_key,agg_value,feasible\n";
    for (const auto& t : trajectories) {
        const std::string prefix = std::to_string(t.run) + ',' + std::to_string(t.vector) + ',';
        for (const auto& s : t.steps) {
            out += prefix;
            out += std::to_string(s.iteration);
            out += ',';
            out += cell_key(s.cell);
            out += ',';
            out += format_double(s.agg_value);
            out += s.feasible ? ",1\n" : ",0\n";
        }
    }
    write_text_file(path, out);
}

std::vector<Trajectory> read_trajectories_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"run", "vector", "iteration",
                                                                               "cell_key", "agg_value", "feasible"}) {
        throw ConfigError(path.string() + ": unexpected trajectory header");
    }
    std::vector<Trajectory> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        auto fail = [&] { throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed row"); };
        if (cells.size() != 6) {
            fail();
        }
        auto run = parse_integer(cells[0]);
        auto vec = parse_integer(cells[1]);
        auto it = parse_integer(cells[2]);
        auto agg = parse_double(cells[4]);
        if (!run || !vec || !it || !agg || *run < 0 || *vec < 0 || *it < 0 ||
            (cells[5] != "0" && cells[5] != "1")) {
            fail();
        }
        const auto r = static_cast<std::size_t>(*run);
        const auto v = static_cast<std::size_t>(*vec);
        if (out.empty() || out.back().run != r || out.back().vector != v) {
            out.push_back({r, v, {}});
        }
        TrajectoryStep s;
        s.iteration = static_cast<std::size_t>(*it);
        s.cell = parse_cell_key(cells[3]);
        s.agg_value = *agg;
        s.feasible = cells[5] == "1";
        out.back().steps.push_back(std::move(s));
    }
    return out;
}

} // namespace moeadstn
