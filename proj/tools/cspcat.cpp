// Umbrella command line tool around the library.  Exit codes: 0 ok,
// 1 negative/violation outcome, 2 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cspcat/reduce.hpp"
#include "cspcat/structures.hpp"
#include "cspcat/textio.hpp"

using namespace cspcat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Ctx {
    std::size_t cap = default_power_cap;
    std::uint64_t seed = 0;
    bool machine = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << content;
}

// Base references are builtin names or paths relative to the referring file.
FinCategoryPtr resolve_ref(const std::string& ref, const fs::path& from, std::size_t cap) {
    if (ref == "digraph")
        return digraph_category();
    if (ref == "symmetric")
        return symmetric_graph_category();
    fs::path p = from.empty() ? fs::path(ref) : from / ref;
    return parse_category(read_file(p.string()), cap);
}

CategoryResolver file_resolver(const fs::path& from, std::size_t cap) {
    return [from, cap](const std::string& ref) { return resolve_ref(ref, from, cap); };
}

Copresheaf load_copresheaf(const std::string& path, std::size_t cap) {
    return parse_copresheaf(read_file(path), file_resolver(fs::path(path).parent_path(), cap));
}

CatFunctor load_functor(const std::string& path, std::size_t cap) {
    return parse_functor(read_file(path), file_resolver(fs::path(path).parent_path(), cap));
}

GadgetFunctor load_gadget(const std::string& gadget_ref, std::size_t cap) {
    // accept either the directory or the manifest file inside it
    fs::path manifest = gadget_ref;
    if (fs::is_directory(manifest))
        manifest /= "gadget.txt";
    fs::path dir = fs::path(manifest).parent_path();
    FileLoader load = [dir](const std::string& name) {
        return read_file((dir / name).string());
    };
    (void)cap;
    return parse_gadget(read_file(manifest.string()), load);
}

// --- json encodings ---------------------------------------------------

json category_json(const FinCategory& c) {
    json j;
    j["objects"] = c.objects;
    json ms = json::array();
    for (const auto& m : c.morphisms)
        ms.push_back({{"name", m.name}, {"src", m.src}, {"tgt", m.tgt}});
    j["morphisms"] = ms;
    json comp = json::array();
    for (const auto& [key, h] : c.composites)
        comp.push_back({{"g", static_cast<std::uint32_t>(key >> 32)},
                        {"f", static_cast<std::uint32_t>(key & 0xffffffffu)},
                        {"gf", h}});
    j["composites"] = comp;
    j["identities"] = c.identities;
    return j;
}

json copresheaf_json(const Copresheaf& x) {
    json j;
    j["base"] = category_json(*x.shape);
    json sets = json::object();
    for (std::size_t o = 0; o < x.sets.size(); ++o)
        sets[x.shape->objects[o]] = *x.sets[o];
    j["sets"] = sets;
    json maps = json::object();
    for (std::size_t m = 0; m < x.maps.size(); ++m)
        maps[x.shape->morphisms[m].name] = x.maps[m];
    j["maps"] = maps;
    return j;
}

json functor_json(const CatFunctor& d) {
    json j;
    j["source"] = category_json(*d.source);
    j["target"] = category_json(*d.target);
    j["object_map"] = d.object_map;
    j["morphism_map"] = d.morphism_map;
    return j;
}

json transformation_json(const Copresheaf& x, const NatTransformation& h) {
    json comp = json::object();
    for (std::size_t o = 0; o < h.components.size(); ++o)
        comp[x.shape->objects[o]] = h.components[o];
    return comp;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// Writes a copresheaf as text, either to stdout (builtin bases only) or
// into a directory next to its base category.
std::string builtin_ref(const FinCategoryPtr& base) {
    if (same_category(base, digraph_category()))
        return "digraph";
    if (same_category(base, symmetric_graph_category()))
        return "symmetric";
    return "";
}

void emit_copresheaf(const Ctx& ctx, const Copresheaf& x, const std::string& out_dir,
                     const std::string& stem = "out") {
    if (ctx.machine) {
        emit(copresheaf_json(x));
        return;
    }
    std::string ref = builtin_ref(x.shape);
    if (out_dir.empty()) {
        if (ref.empty())
            throw Error("the base category is not builtin; pass --out DIR");
        std::cout << serialize_copresheaf(x, ref);
        return;
    }
    fs::create_directories(out_dir);
    if (ref.empty()) {
        ref = "base.txt";
        write_file(fs::path(out_dir) / "base.txt", serialize_category(*x.shape));
    }
    write_file(fs::path(out_dir) / (stem + ".txt"), serialize_copresheaf(x, ref));
    std::cout << (fs::path(out_dir) / (stem + ".txt")).string() << "\n";
}

void emit_functor(const Ctx& ctx, const CatFunctor& d, const std::string& out_dir,
                  const std::string& stem = "instance") {
    if (ctx.machine) {
        emit(functor_json(d));
        return;
    }
    if (out_dir.empty())
        throw Error("functors reference their categories; pass --out DIR");
    fs::create_directories(out_dir);
    std::string sref = builtin_ref(d.source);
    if (sref.empty()) {
        sref = "source.txt";
        write_file(fs::path(out_dir) / "source.txt", serialize_category(*d.source));
    }
    std::string tref = builtin_ref(d.target);
    if (tref.empty()) {
        tref = "target.txt";
        write_file(fs::path(out_dir) / "target.txt", serialize_category(*d.target));
    }
    write_file(fs::path(out_dir) / (stem + ".txt"), serialize_functor(d, sref, tref));
    std::cout << (fs::path(out_dir) / (stem + ".txt")).string() << "\n";
}

SolveMode mode_of(const std::string& name) {
    if (name == "decide")
        return SolveMode::decide;
    if (name == "count")
        return SolveMode::count;
    if (name == "enumerate")
        return SolveMode::enumerate;
    throw Error("unknown mode '" + name + "'");
}

MinorCondition load_condition(const std::string& path) {
    std::string text = read_file(path);
    return parse_condition(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"copresheaf homomorphism problems: solvers, Kan extensions, reductions"};
    app.require_subcommand(1);

    Ctx ctx;
    std::string format = "text";
    app.add_option("--cap", ctx.cap, "size budget for powers, closures and windows");
    app.add_option("--seed", ctx.seed, "seed for sampled corpora");
    app.add_option("--format", format, "text or machine output")
        ->check(CLI::IsMember({"text", "machine"}));

    // common argument slots, wired per subcommand
    std::string arg_x, arg_a, arg_b, arg_c, arg_d, arg_gadget, arg_out;
    std::string arg_mode = "decide", arg_base = "digraph";
    std::vector<std::uint32_t> arg_arities;
    std::uint32_t arg_max_arity = 2, arg_max_v = 3, arg_max_e = 2;
    std::uint32_t arg_samples = 0;
    std::string arg_assert;
    std::string dst_a, dst_b;

    auto* c_solve = app.add_subcommand("solve", "homomorphisms X -> A between copresheaf files");
    c_solve->add_option("x", arg_x)->required();
    c_solve->add_option("a", arg_a)->required();
    c_solve->add_option("--mode", arg_mode)->check(CLI::IsMember({"decide", "count", "enumerate"}));

    auto* c_limit = app.add_subcommand("limit", "limit of a set-valued diagram file");
    c_limit->add_option("d", arg_x)->required();
    c_limit->add_option("--mode", arg_mode)->check(CLI::IsMember({"decide", "count", "enumerate"}));

    auto* c_colimit = app.add_subcommand("colimit", "colimit classes of a diagram file");
    c_colimit->add_option("d", arg_x)->required();

    auto* c_gr = app.add_subcommand("gr", "category of elements of a copresheaf");
    c_gr->add_option("x", arg_x)->required();
    c_gr->add_option("--out", arg_out, "directory for the category and projection files");

    auto* c_gl = app.add_subcommand("gl", "copresheaf glued from an instance functor");
    c_gl->add_option("d", arg_x)->required();
    c_gl->add_option("--out", arg_out);

    auto* c_convert = app.add_subcommand("convert", "between hom and satisfiability form");
    std::string arg_to;
    c_convert->add_option("--to", arg_to)->required()->check(CLI::IsMember({"sat", "hom"}));
    c_convert->add_option("input", arg_x)->required();
    c_convert->add_option("--out", arg_out);

    auto* c_ran = app.add_subcommand("ran", "polymorphism window of a template pair");
    c_ran->add_option("a", arg_a)->required();
    c_ran->add_option("b", arg_b)->required();
    c_ran->add_option("--arity", arg_arities, "arity sizes to record")->required();

    auto* c_lan = app.add_subcommand("lan", "left Kan extension value at a finite set");
    c_lan->add_option("a", arg_a)->required();
    c_lan->add_option("x", arg_x)->required();
    c_lan->add_option("--arity", arg_arities, "size of the value set")->required();

    auto* c_gapply = app.add_subcommand("gadget-apply", "replace elements by gadgets");
    c_gapply->add_option("gadget", arg_gadget)->required();
    c_gapply->add_option("x", arg_x)->required();
    c_gapply->add_option("--out", arg_out);

    auto* c_nerve = app.add_subcommand("nerve", "generalized nerve of a gadget at a template");
    c_nerve->add_option("gadget", arg_gadget)->required();
    c_nerve->add_option("b", arg_b)->required();
    c_nerve->add_option("--out", arg_out);

    auto* c_adj = app.add_subcommand("verify-adjunction", "check the extension/nerve hom counts");
    c_adj->add_option("gadget", arg_gadget)->required();
    c_adj->add_option("a", arg_a)->required();
    c_adj->add_option("c", arg_c)->required();

    auto* c_cond = app.add_subcommand("check-condition", "does Pol(A,B) satisfy a condition");
    c_cond->add_option("a", arg_a)->required();
    c_cond->add_option("b", arg_b)->required();
    c_cond->add_option("condition", arg_c)->required();

    auto* c_interp = app.add_subcommand("interpretable", "condition-to-condition consequence");
    c_interp->add_option("pi", arg_a)->required();
    c_interp->add_option("gamma", arg_b)->required();

    auto* c_probe = app.add_subcommand("probe-hardness", "search for natural choice functions");
    c_probe->add_option("a", arg_a)->required();
    c_probe->add_option("b", arg_b)->required();
    c_probe->add_option("--max-arity", arg_max_arity);

    auto* c_ind = app.add_subcommand("indicator", "free structure of a condition over a template");
    c_ind->add_option("x", arg_x)->required();
    c_ind->add_option("condition", arg_c)->required();
    c_ind->add_option("--out", arg_out);

    auto* c_encode = app.add_subcommand("encode", "relational structure to copresheaf");
    c_encode->add_option("a", arg_a)->required();
    c_encode->add_option("--out", arg_out);

    auto* c_decode = app.add_subcommand("decode", "copresheaf over a signature to a structure");
    c_decode->add_option("x", arg_x)->required();

    auto* c_single = app.add_subcommand("single-sorted", "one-sorted encoding of a copresheaf");
    c_single->add_option("x", arg_x)->required();

    auto* c_ppinst = app.add_subcommand("pp-to-instance", "sentence file to instance functor");
    c_ppinst->add_option("sentence", arg_x)->required();
    c_ppinst->add_option("--base", arg_base, "base category reference");
    c_ppinst->add_option("--out", arg_out);

    auto* c_ppgad = app.add_subcommand("pp-to-gadget", "interpretation file to gadget directory");
    c_ppgad->add_option("interpretation", arg_x)->required();
    c_ppgad->add_option("--out", arg_out)->required();

    auto* c_gadpp = app.add_subcommand("gadget-to-pp", "gadget directory to interpretation");
    c_gadpp->add_option("gadget", arg_gadget)->required();

    auto* c_canon = app.add_subcommand("canonical", "canonical structure of a pp formula");
    c_canon->add_option("formula", arg_x)->required();

    auto* c_reduce = app.add_subcommand("reduce", "universal reduction of an instance");
    c_reduce->add_option("x", arg_x)->required();
    c_reduce->add_option("--src-a", arg_a)->required();
    c_reduce->add_option("--src-b", arg_b)->required();
    c_reduce->add_option("--dst-a", dst_a);
    c_reduce->add_option("--dst-b", dst_b);
    c_reduce->add_option("--out", arg_out);

    auto* c_harness = app.add_subcommand("harness", "validate a reduction over a corpus");
    c_harness->add_option("--src-a", arg_a)->required();
    c_harness->add_option("--src-b", arg_b)->required();
    c_harness->add_option("--dst-a", dst_a);
    c_harness->add_option("--dst-b", dst_b);
    c_harness->add_option("--max-vertices", arg_max_v);
    c_harness->add_option("--max-edges", arg_max_e);
    c_harness->add_option("--samples", arg_samples, "extra random instances");
    c_harness->add_option("--assert", arg_assert, "recorded minion-transformation hypothesis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ctx.machine = format == "machine";

    try {
        if (c_solve->parsed() || c_limit->parsed()) {
            SolveMode mode = mode_of(arg_mode);
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            bool nonempty = false;
            if (c_solve->parsed()) {
                Copresheaf a = load_copresheaf(arg_a, ctx.cap);
                HomResult r = hom(x, a, mode);
                nonempty = r.nonempty;
                if (ctx.machine) {
                    json j{{"nonempty", r.nonempty}, {"count", r.count}};
                    json hs = json::array();
                    for (const auto& h : r.transformations)
                        hs.push_back(transformation_json(x, h));
                    j["transformations"] = hs;
                    emit(j);
                } else {
                    std::cout << "nonempty " << (r.nonempty ? "true" : "false") << "\n";
                    if (mode != SolveMode::decide)
                        std::cout << "count " << r.count << "\n";
                    for (const auto& h : r.transformations)
                        for (std::size_t o = 0; o < h.components.size(); ++o)
                            for (std::size_t i = 0; i < h.components[o].size(); ++i)
                                std::cout << "component " << x.shape->objects[o] << " : "
                                          << (*x.sets[o])[i] << " -> "
                                          << (*a.sets[o])[h.components[o][i]] << "\n";
                }
            } else {
                LimitResult r = limit(x, mode);
                nonempty = r.nonempty;
                if (ctx.machine) {
                    json j{{"nonempty", r.nonempty}, {"count", r.count},
                           {"solutions", r.solutions}};
                    emit(j);
                } else {
                    std::cout << "nonempty " << (r.nonempty ? "true" : "false") << "\n";
                    if (mode != SolveMode::decide)
                        std::cout << "count " << r.count << "\n";
                    for (const auto& sol : r.solutions) {
                        for (std::size_t o = 0; o < sol.size(); ++o)
                            std::cout << (o ? " " : "") << (*x.sets[o])[sol[o]];
                        std::cout << "\n";
                    }
                }
            }
            return nonempty ? 0 : 1;
        }

        if (c_colimit->parsed()) {
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            QuotientSet q = colimit(x);
            if (ctx.machine) {
                json j{{"carrier", *q.carrier}, {"injections", q.injections}};
                emit(j);
            } else {
                for (std::size_t k = 0; k < q.carrier->size(); ++k)
                    std::cout << "class " << (*q.carrier)[k] << "\n";
                for (std::size_t o = 0; o < q.injections.size(); ++o)
                    for (std::size_t e = 0; e < q.injections[o].size(); ++e)
                        std::cout << "inject " << x.shape->objects[o] << " : " << (*x.sets[o])[e]
                                  << " -> " << (*q.carrier)[q.injections[o][e]] << "\n";
            }
            return 0;
        }

        if (c_gr->parsed()) {
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            ElementsCategory el = gr(x);
            if (ctx.machine) {
                emit(json{{"category", category_json(*el.category)},
                          {"projection", functor_json(el.projection)}});
            } else if (arg_out.empty()) {
                std::cout << serialize_category(*el.category);
            } else {
                fs::create_directories(arg_out);
                write_file(fs::path(arg_out) / "elements.txt", serialize_category(*el.category));
                std::string tref = builtin_ref(el.projection.target);
                if (tref.empty()) {
                    tref = "target.txt";
                    write_file(fs::path(arg_out) / "target.txt",
                               serialize_category(*el.projection.target));
                }
                write_file(fs::path(arg_out) / "projection.txt",
                           serialize_functor(el.projection, "elements.txt", tref));
                std::cout << (fs::path(arg_out) / "projection.txt").string() << "\n";
            }
            return 0;
        }

        if (c_gl->parsed()) {
            CatFunctor d = load_functor(arg_x, ctx.cap);
            emit_copresheaf(ctx, gl(d), arg_out);
            return 0;
        }

        if (c_convert->parsed()) {
            if (arg_to == "sat") {
                Copresheaf x = load_copresheaf(arg_x, ctx.cap);
                emit_functor(ctx, gr(x).projection, arg_out);
            } else {
                CatFunctor d = load_functor(arg_x, ctx.cap);
                emit_copresheaf(ctx, gl(d), arg_out);
            }
            return 0;
        }

        if (c_ran->parsed()) {
            Copresheaf a = load_copresheaf(arg_a, ctx.cap);
            Copresheaf b = load_copresheaf(arg_b, ctx.cap);
            std::vector<NamedSet> arities;
            for (auto n : arg_arities)
                arities.push_back(*numbered_set(n));
            MinionTable m = ran_eval(a, b, arities, ctx.cap);
            if (ctx.machine) {
                json j;
                j["sizes"] = json::array();
                for (std::size_t k = 0; k < m.elements.size(); ++k)
                    j["sizes"].push_back(m.elements[k]->size());
                json els = json::array();
                for (std::size_t k = 0; k < m.elements.size(); ++k)
                    els.push_back(*m.elements[k]);
                j["elements"] = els;
                emit(j);
            } else {
                for (std::size_t k = 0; k < m.elements.size(); ++k)
                    std::cout << "arity " << m.arities[k].size() << " : "
                              << m.elements[k]->size() << " elements\n";
            }
            return 0;
        }

        if (c_lan->parsed()) {
            Copresheaf a = load_copresheaf(arg_a, ctx.cap);
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            NamedSet n = *numbered_set(arg_arities.at(0));
            NamedSet value = lan_eval(a, x, n, ctx.cap);
            if (ctx.machine) {
                emit(json{{"carrier", value}});
            } else {
                for (const auto& e : value)
                    std::cout << e << "\n";
            }
            return 0;
        }

        if (c_gapply->parsed() || c_nerve->parsed()) {
            GadgetFunctor g = load_gadget(arg_gadget, ctx.cap);
            if (c_gapply->parsed()) {
                Copresheaf x = load_copresheaf(arg_x, ctx.cap);
                emit_copresheaf(ctx, yoneda_extend(g, x), arg_out);
            } else {
                Copresheaf b = load_copresheaf(arg_b, ctx.cap);
                emit_copresheaf(ctx, nerve(g, b), arg_out);
            }
            return 0;
        }

        if (c_adj->parsed()) {
            GadgetFunctor g = load_gadget(arg_gadget, ctx.cap);
            Copresheaf a = load_copresheaf(arg_a, ctx.cap);
            Copresheaf c = load_copresheaf(arg_c, ctx.cap);
            AdjunctionCheck r = verify_adjunction(g, a, c);
            if (ctx.machine)
                emit(json{{"equal", r.equal}, {"left", r.left}, {"right", r.right}});
            else
                std::cout << "left " << r.left << "\nright " << r.right << "\nequal "
                          << (r.equal ? "true" : "false") << "\n";
            return r.equal ? 0 : 1;
        }

        if (c_cond->parsed()) {
            Copresheaf a = load_copresheaf(arg_a, ctx.cap);
            Copresheaf b = load_copresheaf(arg_b, ctx.cap);
            MinorCondition gamma = load_condition(arg_c);
            SatisfactionResult r = satisfies(a, b, gamma, ctx.cap);
            if (ctx.machine) {
                json j{{"satisfied", r.satisfied}};
                json ws = json::array();
                for (const auto& w : r.witness)
                    ws.push_back(w.components);
                j["witness"] = ws;
                emit(j);
            } else {
                std::cout << "satisfied " << (r.satisfied ? "true" : "false") << "\n";
                for (std::size_t f = 0; f < r.witness.size(); ++f) {
                    std::cout << "witness " << gamma.symbols[f] << " :";
                    for (auto v : flatten_transformation(r.witness[f]))
                        std::cout << " " << v;
                    std::cout << "\n";
                }
            }
            return r.satisfied ? 0 : 1;
        }

        if (c_interp->parsed()) {
            MinorCondition pi = load_condition(arg_a);
            MinorCondition gamma = load_condition(arg_b);
            bool ok = interpretable(pi, gamma, ctx.cap);
            if (ctx.machine)
                emit(json{{"interpretable", ok}});
            else
                std::cout << "interpretable " << (ok ? "true" : "false") << "\n";
            return ok ? 0 : 1;
        }

        if (c_probe->parsed()) {
            Copresheaf a = load_copresheaf(arg_a, ctx.cap);
            Copresheaf b = load_copresheaf(arg_b, ctx.cap);
            HardnessProbeResult r = probe_hardness(a, b, arg_max_arity, ctx.cap);
            if (ctx.machine) {
                emit(json{{"refuted", r.refuted},
                          {"refuted_arity", r.refuted_arity},
                          {"witness", r.witness}});
            } else if (r.refuted) {
                std::cout << "refuted at arity " << r.refuted_arity << "\n";
            } else {
                std::cout << "bounded witness up to arity " << arg_max_arity << "\n";
                for (std::size_t k = 0; k < r.witness.size(); ++k) {
                    std::cout << "choice " << (k + 1) << " :";
                    for (auto v : r.witness[k])
                        std::cout << " " << v;
                    std::cout << "\n";
                }
            }
            return 0;
        }

        if (c_ind->parsed()) {
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            MinorCondition gamma = load_condition(arg_c);
            emit_copresheaf(ctx, free_structure(x, gamma, ctx.cap), arg_out);
            return 0;
        }

        if (c_encode->parsed()) {
            RelationalStructure a = parse_structure(read_file(arg_a));
            emit_copresheaf(ctx, to_copresheaf(a), arg_out);
            return 0;
        }

        if (c_decode->parsed()) {
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            RelationalStructure a = to_structure(x);
            if (ctx.machine)
                emit(json{{"structure", serialize_structure(a)}});
            else
                std::cout << serialize_structure(a);
            return 0;
        }

        if (c_single->parsed()) {
            Copresheaf x = load_copresheaf(arg_x, ctx.cap);
            RelationalStructure a = single_sorted(x, ctx.cap);
            if (ctx.machine)
                emit(json{{"structure", serialize_structure(a)}});
            else
                std::cout << serialize_structure(a);
            return 0;
        }

        if (c_ppinst->parsed()) {
            auto base = resolve_ref(arg_base, fs::path(), ctx.cap);
            PPFormula phi = parse_pp_sentence(read_file(arg_x), *base);
            emit_functor(ctx, pp_sentence_to_instance(phi, base), arg_out);
            return 0;
        }

        if (c_ppgad->parsed()) {
            PPInterpretation phi = parse_interpretation(read_file(arg_x));
            GadgetFunctor g = ppinterp_to_gadget(phi);
            if (ctx.machine) {
                json files = json::object();
                for (const auto& [name, content] : serialize_gadget(g))
                    files[name] = content;
                emit(files);
            } else {
                fs::create_directories(arg_out);
                for (const auto& [name, content] : serialize_gadget(g))
                    write_file(fs::path(arg_out) / name, content);
                std::cout << (fs::path(arg_out) / "gadget.txt").string() << "\n";
            }
            return 0;
        }

        if (c_gadpp->parsed()) {
            GadgetFunctor g = load_gadget(arg_gadget, ctx.cap);
            PPInterpretation phi = gadget_to_ppinterp(g);
            if (ctx.machine)
                emit(json{{"interpretation", serialize_interpretation(phi)}});
            else
                std::cout << serialize_interpretation(phi);
            return 0;
        }

        if (c_canon->parsed()) {
            ParsedFormula f = parse_pp_formula(read_file(arg_x));
            CanonicalResult r = canonical_structure_full(f.formula, f.signature);
            if (ctx.machine)
                emit(json{{"structure", serialize_structure(r.structure)},
                          {"var_class", r.var_class}});
            else
                std::cout << serialize_structure(r.structure);
            return 0;
        }

        if (c_reduce->parsed() || c_harness->parsed()) {
            Copresheaf sa = load_copresheaf(arg_a, ctx.cap);
            Copresheaf sb = load_copresheaf(arg_b, ctx.cap);
            TemplatePair src = template_pair(sa, sb);
            TemplatePair dst = src;
            if (!dst_a.empty() || !dst_b.empty()) {
                if (dst_a.empty() || dst_b.empty())
                    throw Error("--dst-a and --dst-b go together");
                dst = template_pair(load_copresheaf(dst_a, ctx.cap),
                                    load_copresheaf(dst_b, ctx.cap));
            }
            UniversalReducer r = universal_reducer(src, dst, ctx.cap);

            if (c_reduce->parsed()) {
                Copresheaf x = load_copresheaf(arg_x, ctx.cap);
                emit_copresheaf(ctx, r.apply(x), arg_out);
                return 0;
            }

            auto corpus = all_multidigraphs(arg_max_v, arg_max_e);
            std::mt19937_64 rng(ctx.seed);
            for (std::uint32_t i = 0; i < arg_samples; ++i)
                corpus.emplace_back("sample" + std::to_string(i),
                                    random_multidigraph(rng(), arg_max_v + 2, arg_max_e + 2));
            ReductionReport rep =
                harness(corpus, src, dst, [&](const Copresheaf& x) { return r.apply(x); },
                        arg_assert);
            auto verdict_name = [](Verdict v) {
                return v == Verdict::yes ? "yes" : v == Verdict::no ? "no" : "neither";
            };
            auto class_name = [](Classification c) {
                switch (c) {
                    case Classification::sound: return "sound";
                    case Classification::complete: return "complete";
                    case Classification::violation: return "violation";
                    default: return "outside-promise";
                }
            };
            if (ctx.machine) {
                json rows = json::array();
                for (const auto& inst : rep.instances)
                    rows.push_back({{"name", inst.name},
                                    {"input", verdict_name(inst.input)},
                                    {"output", verdict_name(inst.output)},
                                    {"classification", class_name(inst.classification)}});
                emit(json{{"assertion", rep.assertion},
                          {"instances", rows},
                          {"violations", rep.violations},
                          {"outside", rep.outside},
                          {"passed", rep.passed()}});
            } else {
                for (const auto& inst : rep.instances)
                    std::cout << inst.name << " input=" << verdict_name(inst.input)
                              << " output=" << verdict_name(inst.output) << " "
                              << class_name(inst.classification) << "\n";
                std::cout << "instances " << rep.instances.size() << ", violations "
                          << rep.violations << ", outside " << rep.outside << "\n";
                if (!rep.assertion.empty())
                    std::cout << "assertion: " << rep.assertion << "\n";
            }
            return rep.passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
