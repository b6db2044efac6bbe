#include "cspcat/kan.hpp"

#include <algorithm>
#include <numeric>

#include "cspcat/errors.hpp"

namespace cspcat {

namespace {

// Index of a flattened transformation in a lexicographically sorted list.
std::uint32_t flat_index(const std::vector<std::vector<std::uint32_t>>& flats,
                         const std::vector<std::uint32_t>& flat, const char* what) {
    auto it = std::lower_bound(flats.begin(), flats.end(), flat);
    if (it == flats.end() || *it != flat)
        throw Error(std::string(what) + ": composite is not in the enumerated hom set");
    return static_cast<std::uint32_t>(it - flats.begin());
}

std::vector<std::vector<std::uint32_t>> enumerate_flats(const Copresheaf& x, const Copresheaf& b) {
    HomResult hr = hom(x, b, SolveMode::enumerate);
    std::vector<std::vector<std::uint32_t>> flats;
    flats.reserve(hr.transformations.size());
    for (const auto& h : hr.transformations)
        flats.push_back(flatten_transformation(h));
    return flats;
}

NamedSetPtr numbered_elements(std::size_t n, const char* prefix) {
    NamedSet names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(prefix + std::to_string(i));
    return make_set(std::move(names));
}

}

std::uint32_t MinionTable::find_arity(std::size_t size) const {
    for (std::uint32_t i = 0; i < arities.size(); ++i)
        if (arities[i].size() == size)
            return i;
    throw MissingArity("no recorded arity of size " + std::to_string(size));
}

const std::vector<std::uint32_t>& MinionTable::action(std::uint32_t from, std::uint32_t to,
                                                      const std::vector<std::uint32_t>& pi) const {
    if (from >= arities.size() || to >= arities.size())
        throw MissingArity("arity index out of range");
    if (pi.size() != arities[from].size())
        throw ShapeError("minor map does not match the source arity");
    for (std::uint32_t v : pi)
        if (v >= arities[to].size())
            throw ShapeError("minor map value outside the target arity");
    auto key = std::make_tuple(from, to,
                               encode_tuple(pi, static_cast<std::uint32_t>(arities[to].size())));
    auto it = actions.find(key);
    if (it == actions.end())
        throw MissingArity("action not recorded for the given map");
    return it->second;
}

MinionTable ran_eval(const Copresheaf& a, const Copresheaf& b, const std::vector<NamedSet>& arities,
                     std::size_t cap) {
    if (!same_category(a.shape, b.shape))
        throw BaseMismatch("the two template copresheaves do not live over the same base");
    std::uint32_t nobj = static_cast<std::uint32_t>(a.sets.size());

    MinionTable table;
    table.arities = arities;
    // offsets[i][s]: start of object s's block inside a flat over a^{N_i}.
    std::vector<std::vector<std::uint64_t>> offsets(arities.size());
    for (std::uint32_t i = 0; i < arities.size(); ++i) {
        offsets[i].assign(nobj + 1, 0);
        for (std::uint32_t s = 0; s < nobj; ++s)
            offsets[i][s + 1] =
                offsets[i][s] + checked_pow(a.sets[s]->size(), arities[i].size(), cap);
        table.flats.push_back(enumerate_flats(power(a, arities[i], cap), b));
        table.elements.push_back(numbered_elements(table.flats.back().size(), "p"));
    }

    std::vector<std::uint32_t> pi, y, x;
    for (std::uint32_t i = 0; i < arities.size(); ++i) {
        std::uint32_t m = static_cast<std::uint32_t>(arities[i].size());
        for (std::uint32_t j = 0; j < arities.size(); ++j) {
            std::uint32_t n = static_cast<std::uint32_t>(arities[j].size());
            std::uint64_t n_maps = checked_pow(n, m, cap);
            for (std::uint64_t code = 0; code < n_maps; ++code) {
                decode_tuple(code, n, m, pi);
                std::vector<std::uint32_t> act(table.flats[i].size());
                for (std::uint32_t e = 0; e < table.flats[i].size(); ++e) {
                    const auto& flat = table.flats[i][e];
                    std::vector<std::uint32_t> minor(offsets[j][nobj]);
                    for (std::uint32_t s = 0; s < nobj; ++s) {
                        std::uint32_t radix = static_cast<std::uint32_t>(a.sets[s]->size());
                        std::uint64_t block = offsets[j][s + 1] - offsets[j][s];
                        for (std::uint64_t ycode = 0; ycode < block; ++ycode) {
                            decode_tuple(ycode, radix, n, y);
                            x.resize(m);
                            for (std::uint32_t t = 0; t < m; ++t)
                                x[t] = y[pi[t]];
                            minor[offsets[j][s] + ycode] =
                                flat[offsets[i][s] + encode_tuple(x, radix)];
                        }
                    }
                    act[e] = flat_index(table.flats[j], minor, "ran_eval");
                }
                table.actions.emplace(std::make_tuple(i, j, code), std::move(act));
            }
        }
    }
    return table;
}

std::string function_tuple_name(const NamedSet& n, const std::vector<std::uint32_t>& tuple) {
    std::string out = "[";
    for (std::uint32_t i = 0; i < tuple.size(); ++i) {
        if (i)
            out += ",";
        out += n[tuple[i]];
    }
    out += "]";
    return out;
}

LanValue lan_value(const FinDiagram& d, const NamedSet& n, std::size_t cap) {
    const FinCategory& shape = *d.shape;
    auto op = std::make_shared<FinCategory>(opposite(shape));
    std::uint32_t radix = static_cast<std::uint32_t>(n.size());

    FinDiagram od;
    od.shape = op;
    od.sets.resize(shape.object_count());
    od.maps.resize(shape.morphism_count());
    std::vector<std::uint32_t> tuple;
    for (std::uint32_t j = 0; j < shape.object_count(); ++j) {
        std::uint64_t size = checked_pow(radix, d.sets[j]->size(), cap);
        NamedSet names;
        names.reserve(size);
        for (std::uint64_t code = 0; code < size; ++code) {
            decode_tuple(code, radix, static_cast<std::uint32_t>(d.sets[j]->size()), tuple);
            names.push_back(function_tuple_name(n, tuple));
        }
        od.sets[j] = make_set(std::move(names));
    }
    std::vector<std::uint32_t> g, x;
    for (std::uint32_t m = 0; m < shape.morphism_count(); ++m) {
        std::uint32_t i = shape.morphisms[m].src, j = shape.morphisms[m].tgt;
        od.maps[m].resize(od.sets[j]->size());
        if (shape.is_identity(m)) {
            std::iota(od.maps[m].begin(), od.maps[m].end(), 0);
            continue;
        }
        // Precompose a function d(j) -> n with d(m): d(i) -> d(j).
        for (std::uint64_t gcode = 0; gcode < od.sets[j]->size(); ++gcode) {
            decode_tuple(gcode, radix, static_cast<std::uint32_t>(d.sets[j]->size()), g);
            x.resize(d.sets[i]->size());
            for (std::uint32_t t = 0; t < d.sets[i]->size(); ++t)
                x[t] = g[d.maps[m][t]];
            od.maps[m][gcode] = static_cast<std::uint32_t>(encode_tuple(x, radix));
        }
    }

    QuotientSet q = colimit(od);
    LanValue out;
    out.carrier = q.carrier;
    out.representatives = std::move(q.representatives);
    out.injections = std::move(q.injections);
    return out;
}

NamedSet lan_eval(const Copresheaf& a, const Copresheaf& x, const NamedSet& n, std::size_t cap) {
    if (!same_category(a.shape, x.shape))
        throw BaseMismatch("template and instance do not live over the same base category");
    ElementsCategory elems = gr(x);
    return *lan_value(compose_diagram(a, elems.projection), n, cap).carrier;
}

ValidationReport validate_gadget(const GadgetFunctor& g) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };
    if (!g.shape || !g.base) {
        complain("missing shape or base category");
        return report;
    }
    const FinCategory& s = *g.shape;
    if (g.gadgets.size() != s.object_count() || g.arrows.size() != s.morphism_count()) {
        complain("gadget or arrow list does not match the shape");
        return report;
    }
    for (std::uint32_t o = 0; o < s.object_count(); ++o)
        if (!same_category(g.gadgets[o].shape, g.base))
            complain("gadget at " + s.objects[o] + " lives over the wrong base");
    if (!report.ok())
        return report;

    for (std::uint32_t f = 0; f < s.morphism_count(); ++f) {
        std::uint32_t s1 = s.morphisms[f].src, s2 = s.morphisms[f].tgt;
        ValidationReport nat = check_naturality(g.gadgets[s2], g.gadgets[s1], g.arrows[f]);
        for (const auto& v : nat.violations)
            complain("arrow " + s.morphisms[f].name + ": " + v);
        if (s.is_identity(f) && nat.ok()) {
            bool is_id = true;
            for (const auto& comp : g.arrows[f].components)
                for (std::uint32_t e = 0; e < comp.size(); ++e)
                    if (comp[e] != e)
                        is_id = false;
            if (!is_id)
                complain("arrow " + s.morphisms[f].name + ": not the identity");
        }
    }
    if (!report.ok()) {
        std::sort(report.violations.begin(), report.violations.end());
        return report;
    }

    for (std::uint32_t u = 0; u < s.morphism_count(); ++u) {
        if (s.is_identity(u))
            continue;
        for (std::uint32_t v = 0; v < s.morphism_count(); ++v) {
            if (s.is_identity(v) || s.morphisms[v].src != s.morphisms[u].tgt)
                continue;
            std::uint32_t w = s.compose(v, u);
            NatTransformation both =
                compose_transformations(g.gadgets[s.morphisms[v].tgt], g.arrows[v], g.arrows[u]);
            if (both.components != g.arrows[w].components)
                complain("composite " + s.morphisms[v].name + "." + s.morphisms[u].name +
                         " disagrees with " + s.morphisms[w].name);
        }
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

GadgetFunctor yoneda_gadget(const FinCategoryPtr& base) {
    const FinCategory& c = *base;
    GadgetFunctor g;
    g.shape = base;
    g.base = base;
    for (std::uint32_t s = 0; s < c.object_count(); ++s)
        g.gadgets.push_back(yoneda(base, s));

    std::vector<std::vector<std::vector<std::uint32_t>>> homs(c.object_count());
    std::vector<std::uint32_t> position(c.morphism_count(), npos32);
    for (std::uint32_t a = 0; a < c.object_count(); ++a) {
        homs[a].resize(c.object_count());
        for (std::uint32_t b = 0; b < c.object_count(); ++b) {
            homs[a][b] = c.hom_set(a, b);
            for (std::uint32_t i = 0; i < homs[a][b].size(); ++i)
                position[homs[a][b][i]] = i;
        }
    }
    for (std::uint32_t f = 0; f < c.morphism_count(); ++f) {
        std::uint32_t s1 = c.morphisms[f].src, s2 = c.morphisms[f].tgt;
        NatTransformation tr;
        tr.components.resize(c.object_count());
        for (std::uint32_t t = 0; t < c.object_count(); ++t) {
            const auto& from = homs[s2][t];
            tr.components[t].resize(from.size());
            for (std::uint32_t i = 0; i < from.size(); ++i)
                tr.components[t][i] = position[c.compose(from[i], f)];
        }
        g.arrows.push_back(std::move(tr));
    }
    return g;
}

Copresheaf yoneda_extend(const GadgetFunctor& g, const Copresheaf& a) {
    if (!same_category(a.shape, g.shape))
        throw BaseMismatch("the instance does not live over the gadget's source base");
    ElementsCategory e = gr(a);
    auto op = std::make_shared<FinCategory>(opposite(*e.category));
    const FinCategory& t = *g.base;

    Copresheaf out;
    out.shape = g.base;
    out.sets.resize(t.object_count());
    out.maps.resize(t.morphism_count());
    std::vector<QuotientSet> glued(t.object_count());

    for (std::uint32_t tt = 0; tt < t.object_count(); ++tt) {
        FinDiagram od;
        od.shape = op;
        od.sets.resize(op->object_count());
        od.maps.resize(op->morphism_count());
        for (std::uint32_t eo = 0; eo < op->object_count(); ++eo)
            od.sets[eo] = g.gadgets[e.element_of[eo].first].sets[tt];
        for (std::uint32_t em = 0; em < op->morphism_count(); ++em) {
            if (e.category->is_identity(em)) {
                od.maps[em].resize(od.sets[e.category->morphisms[em].src]->size());
                std::iota(od.maps[em].begin(), od.maps[em].end(), 0);
            } else {
                od.maps[em] = g.arrows[e.projection.morphism_map[em]].components[tt];
            }
        }
        glued[tt] = colimit(od);
        out.sets[tt] = glued[tt].carrier;
    }

    for (std::uint32_t u = 0; u < t.morphism_count(); ++u) {
        std::uint32_t t1 = t.morphisms[u].src, t2 = t.morphisms[u].tgt;
        out.maps[u].resize(glued[t1].carrier->size());
        for (std::uint32_t cls = 0; cls < out.maps[u].size(); ++cls) {
            auto [eo, elem] = glued[t1].representatives[cls];
            std::uint32_t s = e.element_of[eo].first;
            out.maps[u][cls] = glued[t2].injections[eo][g.gadgets[s].maps[u][elem]];
        }
    }
    return out;
}

Copresheaf nerve(const GadgetFunctor& g, const Copresheaf& b) {
    if (!same_category(b.shape, g.base))
        throw BaseMismatch("the target does not live over the gadget's base");
    const FinCategory& s = *g.shape;

    Copresheaf out;
    out.shape = g.shape;
    out.sets.resize(s.object_count());
    out.maps.resize(s.morphism_count());

    std::vector<std::vector<std::vector<std::uint32_t>>> flats(s.object_count());
    std::vector<std::vector<std::uint64_t>> offsets(s.object_count());
    for (std::uint32_t o = 0; o < s.object_count(); ++o) {
        flats[o] = enumerate_flats(g.gadgets[o], b);
        out.sets[o] = numbered_elements(flats[o].size(), "h");
        offsets[o].assign(g.gadgets[o].sets.size() + 1, 0);
        for (std::uint32_t tt = 0; tt < g.gadgets[o].sets.size(); ++tt)
            offsets[o][tt + 1] = offsets[o][tt] + g.gadgets[o].sets[tt]->size();
    }

    for (std::uint32_t f = 0; f < s.morphism_count(); ++f) {
        std::uint32_t s1 = s.morphisms[f].src, s2 = s.morphisms[f].tgt;
        out.maps[f].resize(flats[s1].size());
        if (s.is_identity(f)) {
            std::iota(out.maps[f].begin(), out.maps[f].end(), 0);
            continue;
        }
        for (std::uint32_t h = 0; h < flats[s1].size(); ++h) {
            std::vector<std::uint32_t> composite(offsets[s2].back());
            for (std::uint32_t tt = 0; tt < g.gadgets[s2].sets.size(); ++tt)
                for (std::uint32_t e = 0; e < g.gadgets[s2].sets[tt]->size(); ++e)
                    composite[offsets[s2][tt] + e] =
                        flats[s1][h][offsets[s1][tt] + g.arrows[f].components[tt][e]];
            out.maps[f][h] = flat_index(flats[s2], composite, "nerve");
        }
    }
    return out;
}

AdjunctionCheck verify_adjunction(const GadgetFunctor& g, const Copresheaf& a,
                                  const Copresheaf& c) {
    AdjunctionCheck check;
    check.left = hom(yoneda_extend(g, a), c, SolveMode::count).count;
    check.right = hom(a, nerve(g, c), SolveMode::count).count;
    check.equal = check.left == check.right;
    return check;
}

}
