#include "hypermatch/experiment.hpp"

#include "hypermatch/cayley.hpp"
#include "hypermatch/equidecomp.hpp"
#include "hypermatch/random.hpp"
#include "hypermatch/rounding.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hm {

namespace fs = std::filesystem;

namespace {

Json scalar_from_text(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    if (!s.empty() && s.find_first_not_of("-0123456789") == std::string::npos && s != "-") {
        try {
            std::size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    return s;
}

long long get_int(const Json& p, const std::string& key, long long def) {
    if (!p.contains(key)) return def;
    const auto& v = p.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_string()) return std::stoll(v.get<std::string>());
    throw std::invalid_argument("parameter " + key + " must be an integer");
}

std::string get_str(const Json& p, const std::string& key, const std::string& def) {
    if (!p.contains(key)) return def;
    const auto& v = p.at(key);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool get_bool(const Json& p, const std::string& key, bool def) {
    if (!p.contains(key)) return def;
    const auto& v = p.at(key);
    if (v.is_boolean()) return v.get<bool>();
    throw std::invalid_argument("parameter " + key + " must be a boolean");
}

std::vector<int> get_int_list(const Json& p, const std::string& key, std::vector<int> def) {
    if (!p.contains(key)) return def;
    const auto& v = p.at(key);
    std::vector<int> out;
    if (v.is_array())
        for (const auto& x : v) out.push_back(x.is_string() ? std::stoi(x.get<std::string>()) : x.get<int>());
    else
        out.push_back(v.is_string() ? std::stoi(v.get<std::string>()) : v.get<int>());
    return out;
}

class StageWriter {
public:
    StageWriter(const fs::path& root, const std::string& stage) : root_(root), stage_(stage) {
        fs::create_directories(root_ / stage_);
    }
    void write(const std::string& name, const std::string& content) {
        std::ofstream out(root_ / stage_ / name, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + name);
        files.push_back(stage_ + "/" + name);
    }
    std::vector<std::string> files;

private:
    fs::path root_;
    std::string stage_;
};

Json pairs_json(const BipartiteGraph& g, const FractionalAssignment& x) {
    Json pairs = Json::array();
    for (int e = 0; e < g.num_edges(); ++e)
        if (x[e] == 1) pairs.push_back({g.edge(e).u, g.edge(e).w});
    return pairs;
}

// Problems with a claimed perfect matching given as vertex pairs.
std::vector<std::string> matching_problems(const BipartiteGraph& g, const Json& pairs) {
    std::vector<std::string> out;
    std::vector<int> deg(g.num_vertices(), 0);
    for (const auto& p : pairs) {
        int u = p.at(0).get<int>(), w = p.at(1).get<int>();
        if (u < 0 || w < 0 || u >= g.num_vertices() || w >= g.num_vertices() || !g.has_edge(u, w)) {
            out.push_back("edge (" + std::to_string(u) + "," + std::to_string(w) + ") is not in the graph");
            continue;
        }
        ++deg[u], ++deg[w];
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (deg[v] != 1) out.push_back("vertex " + std::to_string(v) + " is matched " + std::to_string(deg[v]) + " times");
    return out;
}

using StageFn = std::function<StageOutcome(const Json&, std::uint64_t, StageWriter&)>;

StageOutcome stage_odd_regular(const Json& p, std::uint64_t seed, StageWriter& w) {
    auto degrees = get_int_list(p, "degrees", {3, 5, 7});
    int graphs = static_cast<int>(get_int(p, "graphs", 5));
    int seeds = static_cast<int>(get_int(p, "seeds", 4));
    int max_n = static_cast<int>(get_int(p, "max_n", 200));
    std::ostringstream results, trace;
    results << "d,graph,n,offsets,seed,perfect,alternating,circuits,rounds,terminal_cycles\n";
    trace << "d,graph,seed,terminal_values\n";
    Json runs = Json::array();
    long bad = 0, total = 0;
    for (int d : degrees) {
        if (d % 2 == 0 || d < 1) throw std::invalid_argument("degrees must be odd");
        for (int gi = 0; gi < graphs; ++gi) {
            int n = std::max(2 * d + 2, max_n - 2 * gi);
            auto offsets = random_offsets(n, d, split_seed(seed, static_cast<std::uint64_t>(d) * 1000 + gi));
            auto circ = bipartite_circulant(n, offsets);
            std::string off_text;
            for (std::size_t i = 0; i < offsets.size(); ++i) off_text += (i ? " " : "") + std::to_string(offsets[i]);
            for (int s = 0; s < seeds; ++s) {
                std::uint64_t rs = split_seed(seed, 1000000ULL + d * 10000ULL + gi * 100ULL + s);
                auto r = odd_regular_matching(circ.g, rs);
                FractionalAssignment x(circ.g.num_edges(), 0);
                for (int e : r.matching) x[e] = 1;
                Json pairs = pairs_json(circ.g, x);
                bool perfect = matching_problems(circ.g, pairs).empty();
                ++total;
                if (!perfect || !r.trace.alternating_ok) ++bad;
                results << d << ',' << gi << ',' << n << ',' << off_text << ',' << rs << ',' << perfect << ','
                        << r.trace.alternating_ok << ',' << r.trace.circuits << ',' << r.trace.rounds << ','
                        << r.trace.terminal_cycles << '\n';
                std::set<std::string> vals;
                for (const auto& [a, b] : r.trace.terminal_values) vals.insert(to_string(a) + ":" + to_string(b));
                std::string joined;
                for (const auto& v : vals) joined += (joined.empty() ? "" : ";") + v;
                trace << d << ',' << gi << ',' << rs << ',' << joined << '\n';
                runs.push_back({{"d", d}, {"n", n}, {"offsets", offsets}, {"seed", rs}, {"pairs", pairs}});
            }
        }
    }
    w.write("results.csv", results.str());
    w.write("trace.csv", trace.str());
    w.write("matchings.json", Json{{"runs", runs}}.dump() + "\n");
    StageOutcome o;
    o.status = bad == 0 ? "ok" : "failed";
    o.message = std::to_string(total - bad) + "/" + std::to_string(total) + " runs perfect with alternating terminal values";
    return o;
}

Json point_list(const PointSet& ps) {
    Json out = Json::array();
    for (const auto& p : ps) out.push_back(p);
    return out;
}

StageOutcome stage_squaring(const Json& p, std::uint64_t seed, StageWriter& w) {
    int n = static_cast<int>(get_int(p, "n", 64));
    Rational alpha = parse_rational(get_str(p, "alpha", "1/4"));
    SquaringOptions o;
    o.alpha = alpha;
    o.radius_budget = static_cast<int>(get_int(p, "radius_budget", 64));
    o.k = static_cast<int>(get_int(p, "k", -1));
    o.seed = seed;
    auto ds = disc_square_sets(n, alpha, seed);
    auto e = equidecompose(ds.a, ds.b, ds.spec, o);
    Json pieces = Json::array();
    for (const auto& pc : e.dec.pieces)
        pieces.push_back({{"word", pc.word}, {"translation", pc.translation}, {"members", pc.members}});
    Json doc{{"n", n},
             {"alpha", to_string(alpha)},
             {"translations", ds.spec.translations},
             {"determinant", ds.spec.determinant},
             {"a", point_list(ds.a)},
             {"b", point_list(ds.b)},
             {"pieces", pieces},
             {"chain", {{"spread", e.cfm.chain.spread}, {"k", e.cfm.chain.k}, {"n2", e.cfm.chain.n2}, {"l", e.cfm.chain.l}}},
             {"r", e.cfm.r},
             {"ball_size", e.ball_size}};
    w.write("pieces.json", doc.dump() + "\n");
    std::ostringstream sum;
    sum << "metric,value\n"
        << "points," << ds.a.size() << "\nmoved_boundary_points," << ds.moved << "\nspread_a," << e.wa.radius
        << "\nspread_b," << e.wb.radius << "\nk," << e.cfm.chain.k << "\nn2," << e.cfm.chain.n2 << "\nl," << e.cfm.chain.l
        << "\nlattice_degree," << e.cfm.r << "\nphi_value," << to_string(e.cfm.value) << "\nconstant_on_gk,"
        << e.cfm.constant_on_gk << "\ngl_edges," << e.cfm.gl.g.num_edges() << "\nsupport_edges," << e.support_edges
        << "\npieces," << e.dec.pieces.size() << "\nball_size," << e.ball_size << "\npartition_ok,"
        << e.partition_error.empty() << "\nok," << e.ok << "\n";
    w.write("summary.csv", sum.str());
    if (get_bool(p, "svg", true) && e.ok) {
        std::ostringstream svg;
        write_pieces_svg(svg, ds.a, e.dec);
        w.write("pieces.svg", svg.str());
    }
    StageOutcome out;
    out.status = e.ok ? "ok" : "failed";
    out.message = e.ok ? std::to_string(e.dec.pieces.size()) + " pieces, partition checks pass" : e.reason;
    return out;
}

CayleyGraph cayley_from_params(const Json& p) {
    CayleySpec spec;
    spec.delta = group_by_name(get_str(p, "delta", "z2"));
    spec.period = static_cast<int>(get_int(p, "period", 200));
    spec.generators = parse_generators(get_str(p, "generators", "1:0,-1:0,0:1"));
    return cayley_z_semidirect(spec, get_str(p, "mode", "match") == "obstruct");
}

StageOutcome stage_cayley(const Json& p, std::uint64_t, StageWriter& w) {
    auto c = cayley_from_params(p);
    StageOutcome out;
    Json doc{{"delta", get_str(p, "delta", "z2")},
             {"period", c.spec.period},
             {"generators", get_str(p, "generators", "1:0,-1:0,0:1")},
             {"mode", get_str(p, "mode", "match")}};
    if (get_str(p, "mode", "match") == "obstruct") {
        auto r = odd_delta_obstruction(c);
        doc["applies"] = r.applies;
        doc["vertex_count_odd"] = r.vertex_count_odd;
        doc["matching_exists"] = r.matching_exists ? Json(*r.matching_exists) : Json(nullptr);
        doc["induced"] = r.induced;
        doc["induced_valid"] = r.induced_valid;
        doc["reason"] = r.reason;
        w.write("obstruction.json", doc.dump() + "\n");
        out.status = "ok";
        out.message = r.reason;
        return out;
    }
    auto [l, m] = generator_reach(c);
    auto t = build_block(c, l, m);
    int k = static_cast<int>(get_int(p, "k", -1));
    std::ostringstream rep;
    rep << "metric,value\n";
    if (k < 0) {
        auto sp = find_spacing(c, t, c.spec.period);
        k = sp.k0;
        rep << "spacings_tried," << sp.tried.size() << '\n';
        if (k == 0) throw std::runtime_error("no spacing window passes up to the period");
    }
    auto r = blocks_and_gaps_matching(c, k, t);
    FractionalAssignment x(c.g.num_edges(), 0);
    for (int e : r.matching) x[e] = 1;
    doc["k"] = k;
    doc["anchors"] = r.anchors;
    doc["pairs"] = pairs_json(c.g, x);
    w.write("matching.json", doc.dump() + "\n");
    rep << "tag," << (t.tag == DeltaCase::split ? "split" : "whole") << "\nl," << l << "\nm," << m << "\nspan," << t.span()
        << "\nk," << k << "\ngaps," << r.gaps << "\nlargest_gap," << r.largest_gap << "\nfailures," << r.failures.size()
        << "\nok," << r.ok << '\n';
    w.write("report.csv", rep.str());
    out.status = r.ok && matching_problems(c.g, doc["pairs"]).empty() ? "ok" : "failed";
    out.message = r.ok ? "blocks and gaps give a perfect matching" : "some gap fails Hall's condition";
    return out;
}

LineSubstrate rounding_substrate(const Json& p) {
    auto kind = get_str(p, "substrate", "ladder-ring");
    if (kind == "ladder-ring") return ladder_ring_substrate(static_cast<int>(get_int(p, "n", 64)), static_cast<int>(get_int(p, "h", 4)));
    if (kind == "ladder-box")
        return ladder_box_substrate(static_cast<int>(get_int(p, "length", 40)), static_cast<int>(get_int(p, "rails", 2)));
    throw std::invalid_argument("unknown rounding substrate " + kind);
}

StageOutcome stage_rounding(const Json& p, std::uint64_t seed, StageWriter& w) {
    auto s = rounding_substrate(p);
    const auto& g = s.w.g;
    RoundingOptions o;
    o.k = static_cast<int>(get_int(p, "k", 2));
    o.seed = seed;
    o.marks = s.marks;
    o.initial = &s.chi;
    o.cover.strip = &s.w.strip;
    o.cover.cyclic_period = s.cyclic_period;
    auto r = round_until_integral(g, unit_demand(g), unit_capacity(g), s.tau, o);
    std::ostringstream tr;
    tr << "iteration,l_before,l_after,changed,ok_i,ok_ii,fallback,redraws,theta,eps,lambda,joint_covered\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto& it = r.trace[i];
        tr << i << ',' << it.l_before << ',' << it.l_after << ',' << it.changed << ',' << it.ok_i << ',' << it.ok_ii << ','
           << it.fallback << ',' << it.redraws << ',' << to_string(it.theta) << ',' << to_string(it.eps) << ','
           << to_string(it.lambda) << ',' << it.joint_covered << '\n';
    }
    w.write("trace.csv", tr.str());
    Json doc = p;
    doc["integral"] = r.integral;
    doc["close_to_tau"] = r.close_to_tau;
    doc["pairs"] = pairs_json(g, r.sigma);
    w.write("sigma.json", doc.dump() + "\n");
    StageOutcome out;
    out.status = r.integral ? "ok" : "obstruction";
    out.message = r.integral ? "integral after " + std::to_string(r.trace.size()) + " iterations" : r.diagnosis;
    return out;
}

const std::map<std::string, StageFn>& stage_table() {
    static const std::map<std::string, StageFn> t{
        {"odd-regular", stage_odd_regular},
        {"squaring", stage_squaring},
        {"cayley", stage_cayley},
        {"rounding", stage_rounding},
    };
    return t;
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing " + path.string());
    return Json::parse(in);
}

std::vector<std::string> verify_stage(const fs::path& root, const std::string& name, const Json& params) {
    std::vector<std::string> out;
    auto prefix = [&](std::vector<std::string> v) {
        for (auto& s : v) out.push_back(name + ": " + s);
    };
    if (name == "odd-regular") {
        auto doc = read_json(root / name / "matchings.json");
        for (const auto& run : doc.at("runs")) {
            auto circ = bipartite_circulant(run.at("n").get<int>(), run.at("offsets").get<std::vector<int>>());
            prefix(matching_problems(circ.g, run.at("pairs")));
        }
    } else if (name == "squaring") {
        auto doc = read_json(root / name / "pieces.json");
        PieceDecomposition dec;
        dec.n = doc.at("n").get<int>();
        for (const auto& pc : doc.at("pieces")) {
            Piece p;
            p.word = pc.at("word").get<Point>();
            p.translation = pc.at("translation").get<Point>();
            p.members = pc.at("members").get<std::vector<int>>();
            dec.pieces.push_back(std::move(p));
        }
        auto a = doc.at("a").get<PointSet>(), b = doc.at("b").get<PointSet>();
        TorusSpec spec;
        spec.n = dec.n;
        spec.d = 2;
        spec.translations = doc.at("translations").get<PointSet>();
        for (const auto& pc : dec.pieces)
            if (word_to_translation(pc.word, spec) != pc.translation) out.push_back(name + ": piece translation is not its word");
        auto err = validate_pieces(a, b, dec);
        if (!err.empty()) out.push_back(name + ": " + err);
    } else if (name == "cayley") {
        if (get_str(params, "mode", "match") == "obstruct") return out;
        auto doc = read_json(root / name / "matching.json");
        prefix(matching_problems(cayley_from_params(params).g, doc.at("pairs")));
    } else if (name == "rounding") {
        auto doc = read_json(root / name / "sigma.json");
        if (doc.at("integral").get<bool>()) prefix(matching_problems(rounding_substrate(params).w.g, doc.at("pairs")));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& known_stages() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, fn] : stage_table()) v.push_back(k);
        return v;
    }();
    return names;
}

ExperimentConfig config_from_json(const Json& doc) {
    ExperimentConfig cfg;
    cfg.doc = doc;
    if (doc.contains("name")) cfg.name = doc.at("name").get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("stages")) {
        const auto& st = doc.at("stages");
        if (st.is_string()) cfg.stages.push_back(st.get<std::string>());
        else
            for (const auto& s : st) cfg.stages.push_back(s.get<std::string>());
    }
    std::set<std::string> seen;
    for (const auto& s : cfg.stages) {
        if (!stage_table().count(s)) throw std::invalid_argument("unknown stage " + s);
        if (!seen.insert(s).second) throw std::invalid_argument("stage listed twice: " + s);
    }
    return cfg;
}

ExperimentConfig parse_toml_config(std::istream& in) {
    CLI::ConfigTOML reader;
    Json doc = Json::object();
    for (const auto& item : reader.from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        Json* node = &doc;
        for (const auto& parent : item.parents) node = &(*node)[parent];
        Json value;
        if (item.name == "stages" || item.inputs.size() != 1) {
            value = Json::array();
            for (const auto& x : item.inputs) value.push_back(scalar_from_text(x));
        } else {
            value = scalar_from_text(item.inputs[0]);
        }
        (*node)[item.name] = value;
    }
    return config_from_json(doc);
}

ExperimentConfig parse_json_config(std::istream& in) { return config_from_json(Json::parse(in)); }

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    if (fs::path(path).extension() == ".json") return parse_json_config(in);
    return parse_toml_config(in);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

BundleResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
    BundleResult res;
    res.dir = out_dir;
    fs::path root(out_dir);
    fs::create_directories(root);
    res.stages.resize(cfg.stages.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < cfg.stages.size();) {
            const auto& name = cfg.stages[i];
            // an explicit per-stage seed pins the instance; otherwise derive one
            Json params = cfg.doc.contains(name) ? cfg.doc.at(name) : Json::object();
            std::uint64_t seed = params.contains("seed") ? static_cast<std::uint64_t>(get_int(params, "seed", 0))
                                                         : split_seed(cfg.seed, i);
            StageWriter w(root, name);
            StageOutcome o;
            try {
                o = stage_table().at(name)(params, seed, w);
            } catch (const std::exception& ex) {
                o.status = "failed";
                o.message = ex.what();
            }
            o.name = name;
            o.seed = seed;
            o.files = w.files;
            res.stages[i] = std::move(o);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    Json stages = Json::array();
    bool failed = false, obstruction = false;
    for (const auto& o : res.stages) {
        Json files = Json::array();
        for (const auto& f : o.files) files.push_back({{"path", f}, {"sha256", sha256_file((root / f).string())}});
        stages.push_back({{"name", o.name}, {"seed", o.seed}, {"status", o.status}, {"message", o.message}, {"files", files}});
        failed = failed || o.status == "failed";
        obstruction = obstruction || o.status == "obstruction";
    }
    res.partial = failed;
    Json manifest{{"format", 1}, {"name", cfg.name}, {"seed", cfg.seed}, {"config", cfg.doc}, {"stages", stages}, {"partial", failed}};
    std::ofstream(root / "manifest.json") << manifest.dump(2) << '\n';
    res.exit_code = failed ? 2 : obstruction ? 3 : 0;
    return res;
}

VerifyReport verify_bundle(const std::string& dir) {
    VerifyReport rep;
    fs::path root(dir);
    Json manifest;
    try {
        manifest = read_json(root / "manifest.json");
    } catch (const std::exception& ex) {
        rep.structural_ok = false;
        rep.problems.push_back(std::string("structural: ") + ex.what());
        return rep;
    }
    const Json& config = manifest.contains("config") ? manifest.at("config") : Json::object();
    for (const auto& st : manifest.at("stages")) {
        std::string name = st.at("name").get<std::string>();
        bool present = true;
        for (const auto& f : st.at("files")) {
            auto path = root / f.at("path").get<std::string>();
            if (!fs::exists(path)) {
                rep.structural_ok = false;
                present = false;
                rep.problems.push_back("structural: missing " + f.at("path").get<std::string>());
                continue;
            }
            if (sha256_file(path.string()) != f.at("sha256").get<std::string>())
                rep.problems.push_back("hash mismatch: " + f.at("path").get<std::string>());
        }
        if (!present || st.at("status").get<std::string>() == "failed") continue;
        try {
            Json params = config.contains(name) ? config.at(name) : Json::object();
            for (auto& p : verify_stage(root, name, params)) rep.problems.push_back(std::move(p));
        } catch (const std::exception& ex) {
            rep.structural_ok = false;
            rep.problems.push_back("structural: " + name + ": " + ex.what());
        }
    }
    rep.ok = rep.problems.empty();
    return rep;
}

FiniteGroup group_by_name(const std::string& name) {
    if (name == "trivial") return trivial_group();
    if (name == "z2xz2") return direct_product(cyclic_group(2), cyclic_group(2));
    if (name.size() > 1 && name[0] == 'z' && name.find_first_not_of("0123456789", 1) == std::string::npos)
        return cyclic_group(std::stoi(name.substr(1)));
    throw std::invalid_argument("unknown group " + name + " (trivial, zM, z2xz2)");
}

std::vector<CayleyGenerator> parse_generators(const std::string& text) {
    std::vector<CayleyGenerator> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("generator must be shift:delta, got " + tok);
        out.push_back({std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
    }
    if (out.empty()) throw std::invalid_argument("empty generator list");
    return out;
}

}  // namespace hm
