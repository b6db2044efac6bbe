#include "cspcat/minion.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "cspcat/errors.hpp"

namespace cspcat {

ValidationReport validate_condition(const MinorCondition& c) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };
    if (c.symbols.size() != c.arities.size()) {
        complain("symbol and arity lists differ in length");
        return report;
    }
    for (std::uint32_t i = 0; i < c.symbols.size(); ++i) {
        if (c.arities[i] == 0)
            complain("symbol " + c.symbols[i] + " has arity 0");
        for (std::uint32_t j = 0; j < i; ++j)
            if (c.symbols[i] == c.symbols[j])
                complain("symbol " + c.symbols[i] + " declared twice");
    }
    for (const auto& e : c.identities) {
        if (e.left >= c.symbols.size() || e.right >= c.symbols.size()) {
            complain("identity references an undeclared symbol");
            continue;
        }
        if (e.pi.size() != c.arities[e.left])
            complain("map for " + c.symbols[e.left] + " = " + c.symbols[e.right] +
                     " does not match the left arity");
        for (std::uint32_t v : e.pi)
            if (v >= c.arities[e.right]) {
                complain("map for " + c.symbols[e.left] + " = " + c.symbols[e.right] +
                         " has an out-of-range value");
                break;
            }
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

MinorCondition siggers_condition() {
    MinorCondition c;
    c.symbols = {"s", "t"};
    c.arities = {6, 3};
    c.identities = {{0, 1, {0, 1, 2, 0, 1, 2}}, {0, 1, {1, 2, 0, 2, 0, 1}}};
    return c;
}

MinorCondition symmetric_binary_condition() {
    MinorCondition c;
    c.symbols = {"f"};
    c.arities = {2};
    c.identities = {{0, 0, {1, 0}}};
    return c;
}

MinorCondition trivial_condition() {
    MinorCondition c;
    c.symbols = {"f"};
    c.arities = {1};
    c.identities = {{0, 0, {0}}};
    return c;
}

FinDiagram condition_to_diagram(const MinorCondition& c) {
    ValidationReport valid = validate_condition(c);
    if (!valid.ok())
        throw ShapeError("invalid minor condition: " + valid.violations.front());

    auto cat = std::make_shared<FinCategory>();
    FinDiagram d;
    std::uint32_t n = static_cast<std::uint32_t>(c.symbols.size());
    cat->objects = c.symbols;
    cat->identities.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        cat->identities[i] = i;
        cat->morphisms.push_back({"id_" + c.symbols[i], i, i});
        d.sets.push_back(numbered_set(c.arities[i]));
        std::vector<std::uint32_t> id_map(c.arities[i]);
        std::iota(id_map.begin(), id_map.end(), 0);
        d.maps.push_back(std::move(id_map));
    }

    std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t>
        seen;
    std::vector<std::uint32_t> arrows;  // non-identity morphism indices
    auto intern = [&](std::uint32_t src, std::uint32_t tgt, std::vector<std::uint32_t> fn,
                      const std::string& name) -> std::uint32_t {
        if (src == tgt) {
            bool is_id = true;
            for (std::uint32_t i = 0; i < fn.size(); ++i)
                if (fn[i] != i)
                    is_id = false;
            if (is_id)
                return cat->identities[src];
        }
        auto key = std::make_tuple(src, tgt, fn);
        auto it = seen.find(key);
        if (it != seen.end())
            return it->second;
        std::uint32_t idx = static_cast<std::uint32_t>(cat->morphisms.size());
        cat->morphisms.push_back({name, src, tgt});
        d.maps.push_back(std::move(fn));
        seen.emplace(std::move(key), idx);
        arrows.push_back(idx);
        return idx;
    };

    for (std::uint32_t k = 0; k < c.identities.size(); ++k)
        intern(c.identities[k].left, c.identities[k].right, c.identities[k].pi,
               "e" + std::to_string(k));

    // Close under composition; terminates because there are finitely many
    // functions between the arity sets.
    std::uint32_t fresh = 0;
    for (std::size_t a = 0; a < arrows.size(); ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            for (auto [g, f] : {std::pair{arrows[a], arrows[b]}, std::pair{arrows[b], arrows[a]}}) {
                if (cat->morphisms[f].tgt != cat->morphisms[g].src)
                    continue;
                if (cat->composites.count(FinCategory::pair_key(g, f)))
                    continue;
                std::vector<std::uint32_t> comp(d.maps[f].size());
                for (std::uint32_t i = 0; i < comp.size(); ++i)
                    comp[i] = d.maps[g][d.maps[f][i]];
                std::uint32_t h = intern(cat->morphisms[f].src, cat->morphisms[g].tgt,
                                         std::move(comp), "c" + std::to_string(fresh++));
                cat->composites.emplace(FinCategory::pair_key(g, f), h);
            }
        }
    }

    d.shape = cat;
    return d;
}

MinorCondition diagram_to_condition(const FinDiagram& d) {
    const FinCategory& shape = *d.shape;
    MinorCondition c;
    c.symbols = shape.objects;
    for (const auto& set : d.sets)
        c.arities.push_back(static_cast<std::uint32_t>(set->size()));

    std::set<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>> seen;
    for (std::uint32_t m = 0; m < shape.morphism_count(); ++m) {
        if (shape.is_identity(m))
            continue;
        std::uint32_t src = shape.morphisms[m].src, tgt = shape.morphisms[m].tgt;
        if (src == tgt) {
            bool is_id = true;
            for (std::uint32_t i = 0; i < d.maps[m].size(); ++i)
                if (d.maps[m][i] != i)
                    is_id = false;
            if (is_id)
                continue;
        }
        if (seen.emplace(src, tgt, d.maps[m]).second)
            c.identities.push_back({src, tgt, d.maps[m]});
    }
    return c;
}

IndicatorStructure indicator_structure(const Copresheaf& x, const MinorCondition& gamma,
                                       std::size_t cap) {
    IndicatorStructure out;
    out.condition = condition_to_diagram(gamma);
    const FinCategory& base = *x.shape;

    out.values.reserve(base.object_count());
    for (std::uint32_t s = 0; s < base.object_count(); ++s)
        out.values.push_back(lan_value(out.condition, *x.sets[s], cap));

    out.copresheaf.shape = x.shape;
    out.copresheaf.sets.resize(base.object_count());
    out.copresheaf.maps.resize(base.morphism_count());
    for (std::uint32_t s = 0; s < base.object_count(); ++s)
        out.copresheaf.sets[s] = out.values[s].carrier;

    std::vector<std::uint32_t> tuple;
    for (std::uint32_t u = 0; u < base.morphism_count(); ++u) {
        std::uint32_t s = base.morphisms[u].src, t = base.morphisms[u].tgt;
        std::uint32_t rs = static_cast<std::uint32_t>(x.sets[s]->size());
        std::uint32_t rt = static_cast<std::uint32_t>(x.sets[t]->size());
        out.copresheaf.maps[u].resize(out.values[s].carrier->size());
        for (std::uint32_t cls = 0; cls < out.copresheaf.maps[u].size(); ++cls) {
            auto [j, code] = out.values[s].representatives[cls];
            decode_tuple(code, rs, static_cast<std::uint32_t>(out.condition.sets[j]->size()),
                         tuple);
            for (auto& v : tuple)
                v = x.maps[u][v];
            out.copresheaf.maps[u][cls] =
                out.values[t].injections[j][static_cast<std::uint32_t>(encode_tuple(tuple, rt))];
        }
    }
    return out;
}

Copresheaf free_structure(const Copresheaf& x, const MinorCondition& gamma, std::size_t cap) {
    return indicator_structure(x, gamma, cap).copresheaf;
}

Copresheaf free_structure(const Copresheaf& x, const MinionTable& m) {
    const FinCategory& base = *x.shape;
    Copresheaf out;
    out.shape = x.shape;
    std::vector<std::uint32_t> arity_of(base.object_count());
    for (std::uint32_t s = 0; s < base.object_count(); ++s) {
        arity_of[s] = m.find_arity(x.sets[s]->size());
        out.sets.push_back(m.elements[arity_of[s]]);
    }
    for (std::uint32_t u = 0; u < base.morphism_count(); ++u)
        out.maps.push_back(
            m.action(arity_of[base.morphisms[u].src], arity_of[base.morphisms[u].tgt], x.maps[u]));
    return out;
}

SatisfactionResult satisfies(const Copresheaf& a, const Copresheaf& b, const MinorCondition& gamma,
                             std::size_t cap) {
    SatisfactionResult result;
    IndicatorStructure ind = indicator_structure(a, gamma, cap);
    HomResult hr = hom(ind.copresheaf, b, SolveMode::decide);
    if (!hr.nonempty)
        return result;
    result.satisfied = true;

    const NatTransformation& h = hr.transformations.front();
    std::uint32_t nobj = static_cast<std::uint32_t>(a.sets.size());
    for (std::uint32_t j = 0; j < ind.condition.sets.size(); ++j) {
        NatTransformation xi;
        xi.components.resize(nobj);
        for (std::uint32_t s = 0; s < nobj; ++s) {
            const auto& inject = ind.values[s].injections[j];
            xi.components[s].resize(inject.size());
            for (std::uint32_t code = 0; code < inject.size(); ++code)
                xi.components[s][code] = h.components[s][inject[code]];
        }
        result.witness.push_back(std::move(xi));
    }
    return result;
}

bool interpretable(const MinorCondition& pi_cond, const MinorCondition& gamma, std::size_t cap) {
    FinDiagram d_pi = condition_to_diagram(pi_cond);
    return limit(free_structure(d_pi, gamma, cap), SolveMode::decide).nonempty;
}

FunctionCategory function_category(const std::vector<NamedSet>& arities) {
    FunctionCategory fc;
    fc.arities = arities;
    auto cat = std::make_shared<FinCategory>();
    std::uint32_t n = static_cast<std::uint32_t>(arities.size());
    cat->identities.assign(n, npos32);
    for (std::uint32_t i = 0; i < n; ++i)
        cat->objects.push_back("[" + std::to_string(arities[i].size()) + "]");

    std::vector<std::vector<std::uint32_t>> block(n, std::vector<std::uint32_t>(n, 0));
    std::vector<std::uint32_t> fn;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            std::uint32_t m = static_cast<std::uint32_t>(arities[i].size());
            std::uint32_t k = static_cast<std::uint32_t>(arities[j].size());
            std::uint64_t count = checked_pow(k, m, default_power_cap);
            block[i][j] = static_cast<std::uint32_t>(cat->morphisms.size());
            for (std::uint64_t code = 0; code < count; ++code) {
                decode_tuple(code, k, m, fn);
                std::string name = std::to_string(i) + ">" + std::to_string(j) + ":" +
                                   function_tuple_name(arities[j], fn);
                cat->morphisms.push_back({std::move(name), i, j});
                if (i == j) {
                    bool is_id = true;
                    for (std::uint32_t v = 0; v < m; ++v)
                        if (fn[v] != v)
                            is_id = false;
                    if (is_id)
                        cat->identities[i] = static_cast<std::uint32_t>(cat->morphisms.size() - 1);
                }
                fc.functions.push_back(fn);
            }
        }
    }

    std::vector<std::uint32_t> comp;
    for (std::uint32_t f = 0; f < cat->morphisms.size(); ++f) {
        if (cat->is_identity(f))
            continue;
        for (std::uint32_t g = 0; g < cat->morphisms.size(); ++g) {
            if (cat->is_identity(g) || cat->morphisms[g].src != cat->morphisms[f].tgt)
                continue;
            comp.resize(fc.functions[f].size());
            for (std::uint32_t v = 0; v < comp.size(); ++v)
                comp[v] = fc.functions[g][fc.functions[f][v]];
            std::uint32_t l = cat->morphisms[g].tgt;
            std::uint32_t idx =
                block[cat->morphisms[f].src][l] +
                static_cast<std::uint32_t>(
                    encode_tuple(comp, static_cast<std::uint32_t>(arities[l].size())));
            cat->composites.emplace(FinCategory::pair_key(g, f), idx);
        }
    }
    fc.category = cat;
    return fc;
}

Copresheaf identity_copresheaf(const FunctionCategory& fc) {
    Copresheaf out;
    out.shape = fc.category;
    for (const auto& set : fc.arities)
        out.sets.push_back(make_set(NamedSet(set)));
    out.maps = fc.functions;
    return out;
}

Copresheaf minion_copresheaf(const FunctionCategory& fc, const MinionTable& table) {
    if (table.arities.size() != fc.arities.size())
        throw ShapeError("minion table does not match the function category's arities");
    Copresheaf out;
    out.shape = fc.category;
    out.sets = table.elements;
    const FinCategory& cat = *fc.category;
    for (std::uint32_t m = 0; m < cat.morphism_count(); ++m)
        out.maps.push_back(
            table.action(cat.morphisms[m].src, cat.morphisms[m].tgt, fc.functions[m]));
    return out;
}

HardnessProbeResult probe_hardness(const Copresheaf& a, const Copresheaf& b,
                                   std::uint32_t max_arity, std::size_t cap) {
    HardnessProbeResult result;
    std::vector<NamedSet> arities;
    for (std::uint32_t k = 1; k <= max_arity; ++k) {
        arities.push_back(*numbered_set(k));
        MinionTable table = ran_eval(a, b, arities, cap);
        FunctionCategory fc = function_category(arities);
        HomResult hr = hom(minion_copresheaf(fc, table), identity_copresheaf(fc),
                           SolveMode::decide);
        result.table = std::move(table);
        if (!hr.nonempty) {
            result.refuted = true;
            result.refuted_arity = k;
            result.witness.clear();
            return result;
        }
        result.witness = hr.transformations.front().components;
    }
    return result;
}

}
