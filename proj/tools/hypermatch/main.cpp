#include "hypermatch/augmenting.hpp"
#include "hypermatch/cayley.hpp"
#include "hypermatch/cycle_cover.hpp"
#include "hypermatch/equidecomp.hpp"
#include "hypermatch/experiment.hpp"
#include "hypermatch/flow.hpp"
#include "hypermatch/polytope.hpp"
#include "hypermatch/rounding.hpp"
#include "hypermatch/toast.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace hm;
namespace fs = std::filesystem;
using Report = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_obstruction = 3;

struct Globals {
    std::string format = "json";
    std::string out;
};

std::string default_dir(const std::string& leaf) {
    const char* env = std::getenv("HYPERMATCH_OUT_DIR");
    return (fs::path(env && *env ? env : "hypermatch-out") / leaf).string();
}

std::string csv_cell(const Report& v) {
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + csv_cell(x);
        return s;
    }
    return v.dump();
}

// Scalars as key,value rows; arrays of objects as their own table.
void emit_csv(std::ostream& out, const Report& r) {
    out << "key,value\n";
    for (const auto& [k, v] : r.items())
        if (!(v.is_array() && !v.empty() && v[0].is_object())) out << k << ',' << csv_cell(v) << '\n';
    for (const auto& [k, v] : r.items()) {
        if (!(v.is_array() && !v.empty() && v[0].is_object())) continue;
        out << "\n# " << k << '\n';
        bool first = true;
        for (const auto& [col, x] : v[0].items()) out << (first ? "" : ",") << col, first = false, (void)x;
        out << '\n';
        for (const auto& row : v) {
            first = true;
            for (const auto& [col, x] : row.items()) out << (first ? "" : ",") << csv_cell(x), first = false, (void)col;
            out << '\n';
        }
    }
}

void emit(const Globals& gl, const Report& r) {
    std::ostringstream buf;
    if (gl.format == "csv") emit_csv(buf, r);
    else buf << r.dump(2) << '\n';
    if (gl.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(gl.out);
        f << buf.str();
    }
}

std::vector<std::string> rationals(const FractionalAssignment& x) {
    std::vector<std::string> out;
    for (const auto& q : x) out.push_back(to_string(q));
    return out;
}

Report certificate_json(const DeficiencyCertificate& c) {
    return Report{{"side", c.side == Side::left ? "left" : "right"},
                  {"set", c.s},
                  {"neighborhood", c.neighborhood},
                  {"demand", c.demand},
                  {"neighborhood_capacity", c.neighborhood_capacity},
                  {"deficit", c.deficit}};
}

void write_text(const std::string& path, const std::string& text) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream(path) << text;
}

// gen

struct GenOpts {
    std::string kind = "grid-torus";
    int n = 8, d = 2, length = 16, rails = 2, p = 1, q = 2, w = 8, h = 8, period = 12;
    std::vector<int> offsets;
    std::uint64_t seed = 0;
    std::string delta = "z2", gens = "1:0,-1:0,0:1";
};

int run_gen(const Globals& gl, const GenOpts& o) {
    GraphBundle b;
    if (o.kind == "grid-torus") b.g = grid_torus(o.d, o.n).g;
    else if (o.kind == "grid-box") b.g = grid_box(o.w, o.h).g;
    else if (o.kind == "ladder") b.g = ladder(o.length, o.rails).g;
    else if (o.kind == "circulant") b.g = bipartite_circulant(o.n, o.offsets.empty() ? random_offsets(o.n, o.d, o.seed) : o.offsets).g;
    else if (o.kind == "gadget") {
        auto gg = gadget_graph(rotation_graph(o.n, o.p), o.q);
        b.g = gg.g;
        b.t = gg.tau;
    } else if (o.kind == "cayley") {
        CayleySpec s;
        s.delta = group_by_name(o.delta);
        s.period = o.period;
        s.generators = parse_generators(o.gens);
        b.g = cayley_z_semidirect(s, true).g;
    } else {
        throw std::invalid_argument("unknown kind " + o.kind);
    }
    if (gl.out.empty()) write_graph(std::cout, b);
    else write_text(gl.out, graph_to_string(b));
    return exit_ok;
}

// solve / descend

int run_solve(const Globals& gl, const std::string& path, bool integral, const std::string& write) {
    auto b = read_graph_file(path);
    auto res = integral ? perfect_f_matching(b.g, b.demand(), b.capacity())
                        : perfect_fractional_f_matching(b.g, b.demand(), b.capacity());
    Report r{{"vertices", b.g.num_vertices()}, {"edges", b.g.num_edges()}, {"feasible", res.ok()}};
    if (res.ok()) {
        r["values"] = rationals(*res.assignment);
        r["valid"] = validate_perfect_fractional_matching(b.g, b.demand(), b.capacity(), *res.assignment).ok;
        if (!write.empty()) {
            b.t = *res.assignment;
            write_text(write, graph_to_string(b));
        }
    } else {
        r["certificate"] = certificate_json(*res.certificate);
    }
    emit(gl, r);
    return res.ok() ? exit_ok : exit_validation;
}

int run_descend(const Globals& gl, const std::string& path, const std::string& rule, std::uint64_t seed) {
    auto b = read_graph_file(path);
    FractionalAssignment t;
    if (b.t) {
        t = *b.t;
    } else {
        auto res = perfect_fractional_f_matching(b.g, b.demand(), b.capacity());
        if (!res.ok()) {
            emit(gl, Report{{"feasible", false}, {"certificate", certificate_json(*res.certificate)}});
            return exit_validation;
        }
        t = *res.assignment;
    }
    Rng rng(seed);
    DescentOptions o;
    o.rule = rule == "random" ? SignRule::random : SignRule::face;
    o.rng = &rng;
    auto rep = descend_to_extreme(t, b.g, b.demand(), b.capacity(), o);
    Report hist = Report::array();
    for (const auto& [v, c] : rep.histogram) hist.push_back({{"value", to_string(v)}, {"edges", c}});
    long one_lined = std::count(rep.one_lined.begin(), rep.one_lined.end(), 1);
    bool integral = std::all_of(rep.chi.begin(), rep.chi.end(), [](const Rational& x) { return is_integer(x); });
    Report r{{"steps", rep.steps},    {"integral", integral},         {"half_edges", rep.lines.size()},
             {"lines", rep.decomposition.size()}, {"one_lined_components", one_lined}, {"histogram", hist},
             {"values", rationals(rep.chi)}};
    emit(gl, r);
    return exit_ok;
}

// toast

int run_toast(const Globals& gl, int w, int h, std::vector<int> frames, std::vector<int> schedule) {
    auto box = grid_box(w, h);
    auto report = [&](const Toast& t, const ToastReport& v) {
        return Report{{"tiles", t.tiles.size()},
                      {"depth", t.depth()},
                      {"covers_edges", v.covers_edges},
                      {"nested", v.nested},
                      {"connected", v.connected},
                      {"uncovered_edges", v.uncovered_edges},
                      {"disconnected_tiles", v.disconnected_tiles},
                      {"ok", v.ok()}};
    };
    Report r{{"vertices", box.g.num_vertices()}};
    bool ok = true;
    HeightForest forest;
    if (frames.empty()) {
        forest = one_ended_spanning_forest(box.g);
    } else {
        // frame tiles directly, then the band construction over their forest
        auto fh = frame_hierarchy(box, frames);
        auto v = verify_toast(fh.toast, box.g);
        r["frames"] = report(fh.toast, v);
        ok = v.ok();
        forest = fh.forest;
    }
    auto b = build_toast(forest, box.g, schedule);
    auto v = verify_toast(b.toast, box.g);
    r["bands"] = report(b.toast, v);
    r["bands"]["schedule"] = b.coverage.schedule;
    ok = ok && v.ok();
    r["ok"] = ok;
    emit(gl, r);
    return ok ? exit_ok : exit_validation;
}

// cover

struct CoverOpts {
    std::string substrate = "ladder-ring";
    int n = 64, h = 4, length = 40, rails = 2, side = 655, lines = 20, k = 2;
    std::vector<int> frames{79, 161, 325};
    std::string eps = "1/4";
    std::uint64_t seed = 1;
};

int run_cover(const Globals& gl, const CoverOpts& o) {
    Rational eps = parse_rational(o.eps);
    Report r{{"substrate", o.substrate}, {"k", o.k}, {"eps", to_string(eps)}};
    BipartiteGraph g;
    EdgeSet l;
    CoverResult c;
    if (o.substrate == "grid-box") {
        auto box = grid_box(o.side, o.side);
        auto fh = frame_hierarchy(box, o.frames);
        l = staircase_lines(box, o.lines, o.seed);
        c = cover_lines_one_ended(box.g, l, fh.toast, o.k, eps);
        g = box.g;
    } else {
        auto s = o.substrate == "ladder-box" ? ladder_box_substrate(o.length, o.rails) : ladder_ring_substrate(o.n, o.h);
        l = s.lines;
        c = cover_lines_two_ended(s.w.g, s.w.strip, l, o.k, eps, s.cyclic_period);
        g = s.w.g;
    }
    auto a = audit_cover(c.fam, g, l);
    r["method"] = c.stats.method;
    r["line_edges"] = a.line_edges;
    r["joint_covered"] = a.joint_covered;
    r["family_covered"] = a.family_covered;
    r["max_offline"] = a.max_offline;
    r["target"] = to_string(c.stats.target);
    r["coverage_ok"] = c.stats.coverage_ok;
    r["disjoint_within_families"] = a.disjoint_within_families;
    emit(gl, r);
    return c.stats.coverage_ok && a.disjoint_within_families ? exit_ok : exit_validation;
}

// round

int run_round(const Globals& gl, const CoverOpts& o) {
    auto s = o.substrate == "ladder-box" ? ladder_box_substrate(o.length, o.rails) : ladder_ring_substrate(o.n, o.h);
    const auto& g = s.w.g;
    RoundingOptions ro;
    ro.k = o.k;
    ro.seed = o.seed;
    ro.marks = s.marks;
    ro.initial = &s.chi;
    ro.cover.strip = &s.w.strip;
    ro.cover.cyclic_period = s.cyclic_period;
    auto res = round_until_integral(g, unit_demand(g), unit_capacity(g), s.tau, ro);
    Report trace = Report::array();
    for (const auto& it : res.trace)
        trace.push_back({{"l_before", it.l_before}, {"l_after", it.l_after}, {"changed", it.changed}, {"ok_i", it.ok_i},
                         {"ok_ii", it.ok_ii}, {"fallback", it.fallback}, {"theta", to_string(it.theta)},
                         {"eps", to_string(it.eps)}, {"lambda", to_string(it.lambda)}});
    Report r{{"substrate", o.substrate}, {"integral", res.integral}, {"close_to_tau", res.close_to_tau},
             {"iterations", res.trace.size()}, {"diagnosis", res.diagnosis}, {"trace", trace}};
    emit(gl, r);
    return res.integral ? exit_ok : exit_obstruction;
}

// augment

int run_augment(const Globals& gl, const std::string& mode, const CoverOpts& o) {
    auto s = ladder_chord_substrate(o.n, o.rails);
    const auto& g = s.w.g;
    Rational eps = parse_rational(o.eps);
    auto cov = cover_one_lined(g, s.chi, o.k, eps);
    Report r{{"n", o.n}, {"rails", o.rails}, {"k", o.k}, {"eps", to_string(eps)}, {"branch", cov.branch},
             {"line_edges", cov.audit.line_edges}, {"joint_both_class", cov.audit.joint_both_class},
             {"max_off_line", cov.audit.max_off_line}, {"max_on_line", cov.audit.max_on_line},
             {"target_met", cov.target_met}};
    if (mode == "step") {
        auto st = one_lined_step(g, unit_demand(g), unit_capacity(g), s.chi, cov.fam, o.seed, s.marks);
        r["subfamilies"] = st.subfamilies;
        r["chosen"] = st.chosen;
        r["z"] = st.z;
        r["half_edges_after"] = st.next.lines.size();
        r["barycenter_distance"] = st.barycenter_distance;
    }
    emit(gl, r);
    if (cov.branch == "no-chords") return exit_obstruction;
    return cov.target_met && cov.audit.off_line_ok && cov.audit.on_line_ok ? exit_ok : exit_validation;
}

// cayley

struct CayleyOpts {
    std::string delta = "z2", gens = "1:0,-1:0,0:1";
    int period = 200, k = -1;
};

int run_cayley(const Globals& gl, const std::string& mode, const CayleyOpts& o) {
    CayleySpec spec;
    spec.delta = group_by_name(o.delta);
    spec.period = o.period;
    spec.generators = parse_generators(o.gens);
    auto c = cayley_z_semidirect(spec, mode == "obstruct");
    Report r{{"delta", o.delta}, {"period", o.period}, {"generators", o.gens}, {"vertices", c.g.num_vertices()},
             {"bipartite", c.bipartite}};
    if (mode == "obstruct") {
        auto ob = odd_delta_obstruction(c);
        r["applies"] = ob.applies;
        r["vertex_count_odd"] = ob.vertex_count_odd;
        r["matching_exists"] = ob.matching_exists ? Report(*ob.matching_exists) : Report(nullptr);
        r["induced_valid"] = ob.induced_valid;
        r["reason"] = ob.reason;
        emit(gl, r);
        return exit_ok;
    }
    auto cls = classify_delta_bipartition(c);
    auto [l, m] = generator_reach(c);
    auto t = build_block(c, l, m);
    r["case"] = cls.tag == DeltaCase::split ? "split" : "whole";
    r["delta_prime"] = cls.delta_prime;
    r["l"] = l;
    r["m"] = m;
    r["span"] = t.span();
    r["half_copies"] = t.half_copies;
    r["block_valid"] = validate_block(c, t).empty();
    if (mode == "block") {
        emit(gl, r);
        return r["block_valid"].get<bool>() ? exit_ok : exit_validation;
    }
    int k = o.k;
    if (k < 0) {
        auto sp = find_spacing(c, t, o.period);
        r["spacings_tried"] = sp.tried.size();
        k = sp.k0;
        if (k == 0) {
            r["ok"] = false;
            emit(gl, r);
            return exit_validation;
        }
    }
    auto res = blocks_and_gaps_matching(c, k, t);
    r["k"] = k;
    r["anchors"] = res.anchors.size();
    r["gaps"] = res.gaps;
    r["largest_gap"] = res.largest_gap;
    r["failures"] = res.failures.size();
    if (!res.failures.empty()) r["certificate"] = certificate_json(res.failures[0].certificate);
    r["ok"] = res.ok;
    emit(gl, r);
    return res.ok ? exit_ok : exit_validation;
}

// squaring

struct SquaringCli {
    int n = 64;
    std::string alpha = "1/4";
    std::uint64_t seed = 1, seed2 = 2;
    int budget = 64, k = -1;
    bool svg = false, relax = false;
    std::string dir;
};

int run_squaring(const Globals& gl, const std::string& mode, const SquaringCli& o) {
    SquaringOptions so;
    so.alpha = parse_rational(o.alpha);
    so.radius_budget = o.budget;
    so.k = o.k;
    so.seed = o.seed;
    auto ds = disc_square_sets(o.n, so.alpha, o.seed);
    auto e = equidecompose(ds.a, ds.b, ds.spec, so);
    Report r{{"n", o.n},
             {"alpha", to_string(so.alpha)},
             {"points", ds.a.size()},
             {"moved_boundary_points", ds.moved},
             {"spread_a", e.wa.radius},
             {"spread_b", e.wb.radius},
             {"k", e.cfm.chain.k},
             {"n2", e.cfm.chain.n2},
             {"l", e.cfm.chain.l},
             {"lattice_degree", e.cfm.r},
             {"constant_on_gk", e.cfm.constant_on_gk},
             {"pieces", e.dec.pieces.size()},
             {"ball_size", e.ball_size},
             {"partition_ok", e.partition_error.empty()},
             {"ok", e.ok},
             {"reason", e.reason}};
    std::string dir = o.dir.empty() ? default_dir("squaring") : o.dir;
    int code = e.ok ? exit_ok : exit_validation;
    if (e.ok && mode == "run") {
        Report pieces = Report::array();
        for (const auto& pc : e.dec.pieces) {
            Report pts = Report::array();
            for (int i : pc.members) pts.push_back(ds.a[i]);
            pieces.push_back({{"word", pc.word}, {"translation", pc.translation}, {"points", pts}});
        }
        write_text((fs::path(dir) / "pieces.json").string(), Report{{"pieces", pieces}}.dump() + "\n");
        if (o.svg) {
            std::ostringstream svg;
            write_pieces_svg(svg, ds.a, e.dec);
            write_text((fs::path(dir) / "pieces.svg").string(), svg.str());
        }
        r["output_dir"] = dir;
    }
    if (e.ok && mode == "combine") {
        auto s2 = random_torus_spec(o.n, o.seed2);
        auto e2 = equidecompose(ds.a, ds.b, s2, so);
        r["second_ok"] = e2.ok;
        if (!e2.ok) {
            r["reason"] = e2.reason;
            code = exit_validation;
        } else {
            auto c = combine_equidecompositions(ds.a, ds.b, e, ds.spec, e2, s2, o.relax);
            r["h_edges"] = c.h_edges;
            r["components_finite"] = c.finite;
            r["components_two_ended"] = c.two_ended;
            r["components_one_ended"] = c.one_ended;
            r["combined_pieces"] = c.dec.pieces.size();
            r["generators_used"] = c.generators_used.size();
            r["combined_ok"] = c.ok;
            if (!c.integral) code = exit_obstruction;
            else if (!c.ok) code = exit_validation;
        }
    }
    emit(gl, r);
    return code;
}

// run / verify

int run_config(const Globals& gl, const std::string& config, const std::string& out, int jobs) {
    auto cfg = load_config(config);
    std::string dir = out.empty() ? default_dir(cfg.name) : out;
    auto res = run_experiment(cfg, dir, jobs);
    Report stages = Report::array();
    for (const auto& s : res.stages)
        stages.push_back({{"stage", s.name}, {"status", s.status}, {"message", s.message}, {"files", s.files.size()}});
    emit(gl, Report{{"bundle", dir}, {"partial", res.partial}, {"exit_code", res.exit_code}, {"stages", stages}});
    return res.exit_code;
}

int run_verify(const Globals& gl, const std::string& bundle) {
    auto rep = verify_bundle(bundle);
    Report problems = Report::array();
    for (const auto& p : rep.problems) problems.push_back({{"problem", p}});
    emit(gl, Report{{"bundle", bundle}, {"ok", rep.ok}, {"structural_ok", rep.structural_ok}, {"problems", problems}});
    return rep.ok ? exit_ok : exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypermatch: fractional-to-integral matching experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;
    app.add_option("--format", gl.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("-o,--out", gl.out, "Write the report (or graph) to this file instead of stdout");
    std::function<int()> action;

    GenOpts go;
    auto* gen = app.add_subcommand("gen", "Generate a substrate graph in the text graph format");
    gen->add_option("kind", go.kind, "grid-torus | grid-box | ladder | circulant | gadget | cayley")->required();
    gen->add_option("--n", go.n, "Side, vertex count or circulant order");
    gen->add_option("--d", go.d, "Dimension or degree");
    gen->add_option("--width", go.w);
    gen->add_option("--height", go.h);
    gen->add_option("--length", go.length);
    gen->add_option("--rails", go.rails);
    gen->add_option("--p", go.p, "Rotation step");
    gen->add_option("--q", go.q, "Gadget step");
    gen->add_option("--offsets", go.offsets, "Circulant offsets (random when omitted)");
    gen->add_option("--seed", go.seed);
    gen->add_option("--delta", go.delta, "trivial | zM | z2xz2");
    gen->add_option("--period", go.period);
    gen->add_option("--gens", go.gens, "Generators shift:delta,...");
    gen->callback([&] { action = [&] { return run_gen(gl, go); }; });

    std::string graph_path, write_path, rule = "face";
    bool integral = false;
    std::uint64_t dseed = 0;
    auto* solve = app.add_subcommand("solve", "Perfect (fractional) f-matching or a Hall certificate");
    solve->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    solve->add_flag("--integral", integral, "Integral matching instead of a fractional one");
    solve->add_option("--write", write_path, "Write the graph with the solution as t");
    solve->callback([&] { action = [&] { return run_solve(gl, graph_path, integral, write_path); }; });

    auto* descend = app.add_subcommand("descend", "Descend to an extreme point");
    descend->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    descend->add_option("--rule", rule)->check(CLI::IsMember({"face", "random"}));
    descend->add_option("--seed", dseed);
    descend->callback([&] { action = [&] { return run_descend(gl, graph_path, rule, dseed); }; });

    int tw = 32, th = 32;
    std::vector<int> frames, schedule;
    auto* toast = app.add_subcommand("toast", "Build and verify a connected toast on a grid window");
    toast->add_option("--width", tw);
    toast->add_option("--height", th);
    toast->add_option("--frames", frames, "Nested frame sides (default: spanning-forest construction)");
    toast->add_option("--schedule", schedule, "Height bands (default geometric)");
    toast->callback([&] { action = [&] { return run_toast(gl, tw, th, frames, schedule); }; });

    CoverOpts co;
    auto add_cover_opts = [&](CLI::App* sc, bool with_substrate) {
        if (with_substrate) sc->add_option("--substrate", co.substrate, "ladder-ring | ladder-box | grid-box");
        sc->add_option("--n", co.n);
        sc->add_option("--height", co.h);
        sc->add_option("--length", co.length);
        sc->add_option("--rails", co.rails);
        sc->add_option("--k", co.k);
        sc->add_option("--eps", co.eps);
        sc->add_option("--seed", co.seed);
    };
    auto* cover = app.add_subcommand("cover", "Cycle covers of half-valued lines");
    add_cover_opts(cover, true);
    cover->add_option("--side", co.side);
    cover->add_option("--frames", co.frames);
    cover->add_option("--lines", co.lines);
    cover->callback([&] { action = [&] { return run_cover(gl, co); }; });

    auto* round = app.add_subcommand("round", "Randomized rounding until integral");
    add_cover_opts(round, true);
    round->callback([&] { action = [&] { return run_round(gl, co); }; });

    std::string amode = "cover";
    auto* augment = app.add_subcommand("augment", "Augmenting-cycle covers and successor steps on one-lined substrates");
    augment->add_option("mode", amode, "cover | step")->check(CLI::IsMember({"cover", "step"}));
    add_cover_opts(augment, false);
    augment->callback([&] { action = [&] { return run_augment(gl, amode, co); }; });

    CayleyOpts cy;
    std::string cmode = "match";
    auto* cayley = app.add_subcommand("cayley", "Block/gap matchings and the odd-order obstruction on Z/N x Delta");
    cayley->add_option("mode", cmode, "block | match | obstruct")->check(CLI::IsMember({"block", "match", "obstruct"}));
    cayley->add_option("--delta", cy.delta);
    cayley->add_option("--period", cy.period);
    cayley->add_option("--gens", cy.gens);
    cayley->add_option("--k", cy.k, "Block spacing (default: searched)");
    cayley->callback([&] { action = [&] { return run_cayley(gl, cmode, cy); }; });

    SquaringCli sq;
    std::string smode = "run";
    auto* squaring = app.add_subcommand("squaring", "Disc/square equidecomposition on a discrete torus");
    squaring->add_option("mode", smode, "run | combine")->check(CLI::IsMember({"run", "combine"}));
    squaring->add_option("--n", sq.n);
    squaring->add_option("--alpha", sq.alpha, "Density 1/s^2");
    squaring->add_option("--seed", sq.seed);
    squaring->add_option("--seed2", sq.seed2, "Seed of the second generator set (combine)");
    squaring->add_option("--radius-budget", sq.budget);
    squaring->add_option("--k", sq.k);
    squaring->add_flag("--svg", sq.svg, "Also write pieces.svg");
    squaring->add_flag("--relax", sq.relax, "Combine the fractional relaxations instead of the matchings");
    squaring->add_option("--dir", sq.dir, "Output directory (default $HYPERMATCH_OUT_DIR/squaring)");
    squaring->callback([&] { action = [&] { return run_squaring(gl, smode, sq); }; });

    std::string config, bundle_out;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "Run an experiment config into a bundle");
    run->add_option("config", config)->required()->check(CLI::ExistingFile);
    run->add_option("--bundle", bundle_out, "Bundle directory (default $HYPERMATCH_OUT_DIR/<name>)");
    run->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    run->callback([&] { action = [&] { return run_config(gl, config, bundle_out, jobs); }; });

    std::string bundle;
    auto* verify = app.add_subcommand("verify", "Re-validate a bundle");
    verify->add_option("bundle", bundle)->required();
    verify->callback([&] { action = [&] { return run_verify(gl, bundle); }; });

    CLI11_PARSE(app, argc, argv);
    try {
        return action ? action() : exit_ok;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
}
