#include "cspcat/structures.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace cspcat {

namespace {

std::string tuple_name(const NamedSet& names, const std::vector<std::uint32_t>& tuple) {
    std::string out = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i)
            out += ",";
        out += names[tuple[i]];
    }
    out += ")";
    return out;
}

std::vector<std::uint32_t> iota_map(std::size_t n) {
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0u);
    return v;
}

bool has_tuple(const std::vector<std::vector<std::uint32_t>>& tuples,
               const std::vector<std::uint32_t>& t) {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    return it != tuples.end() && *it == t;
}

}  // namespace

ValidationReport validate_signature(const RelationalSignature& sig) {
    ValidationReport rep;
    if (sig.names.size() != sig.arities.size())
        rep.violations.push_back("signature has " + std::to_string(sig.names.size()) +
                                 " names but " + std::to_string(sig.arities.size()) + " arities");
    std::unordered_set<std::string> seen;
    for (std::size_t j = 0; j < sig.names.size(); ++j) {
        if (sig.names[j].empty())
            rep.violations.push_back("symbol " + std::to_string(j) + " has an empty name");
        if (sig.names[j] == "V")
            rep.violations.push_back("symbol name V is reserved for the vertex object");
        if (!seen.insert(sig.names[j]).second)
            rep.violations.push_back("duplicate symbol " + sig.names[j]);
    }
    for (std::size_t j = 0; j < sig.arities.size(); ++j)
        if (sig.arities[j] == 0)
            rep.violations.push_back("symbol " + (j < sig.names.size() ? sig.names[j] : "?") +
                                     " has arity 0");
    return rep;
}

ValidationReport validate_structure(const RelationalStructure& a) {
    ValidationReport rep = validate_signature(a.signature);
    std::unordered_set<std::string> seen;
    for (const auto& e : a.domain)
        if (!seen.insert(e).second)
            rep.violations.push_back("duplicate domain element " + e);
    if (a.relations.size() != a.signature.names.size()) {
        rep.violations.push_back("structure has " + std::to_string(a.relations.size()) +
                                 " relations for " + std::to_string(a.signature.names.size()) +
                                 " symbols");
        return rep;
    }
    for (std::size_t j = 0; j < a.relations.size(); ++j) {
        const auto& rel = a.relations[j];
        for (const auto& t : rel) {
            if (t.size() != a.signature.arities[j]) {
                rep.violations.push_back("tuple width mismatch in " + a.signature.names[j]);
                break;
            }
            for (auto v : t)
                if (v >= a.domain.size()) {
                    rep.violations.push_back("tuple entry out of range in " + a.signature.names[j]);
                    break;
                }
        }
        if (!std::is_sorted(rel.begin(), rel.end()) ||
            std::adjacent_find(rel.begin(), rel.end()) != rel.end())
            rep.violations.push_back("relation " + a.signature.names[j] +
                                     " is not sorted and deduplicated");
    }
    return rep;
}

FinCategoryPtr signature_category(const RelationalSignature& sig) {
    auto rep = validate_signature(sig);
    if (!rep.ok())
        throw ShapeError(rep.violations.front());
    FinCategory c;
    c.objects.push_back("V");
    for (const auto& name : sig.names)
        c.objects.push_back(name);
    for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
        c.identities.push_back(static_cast<std::uint32_t>(c.morphisms.size()));
        c.morphisms.push_back({"id_" + c.objects[i], i, i});
    }
    for (std::uint32_t j = 0; j < sig.names.size(); ++j)
        for (std::uint32_t i = 1; i <= sig.arities[j]; ++i)
            c.morphisms.push_back({sig.names[j] + "." + std::to_string(i), j + 1, 0});
    return std::make_shared<FinCategory>(std::move(c));
}

SignatureShape recognize_signature(const FinCategory& c) {
    if (c.object_count() == 0)
        throw BaseShape("a signature category has at least the vertex object");
    SignatureShape out;
    out.signature.names.assign(c.objects.begin() + 1, c.objects.end());
    out.projections.resize(c.object_count() - 1);
    for (std::uint32_t m = 0; m < c.morphism_count(); ++m) {
        if (c.is_identity(m))
            continue;
        const Morphism& mo = c.morphisms[m];
        if (mo.tgt != 0 || mo.src == 0)
            throw BaseShape("arrow " + mo.name + " is not a projection to the vertex object");
        out.projections[mo.src - 1].push_back(m);
    }
    for (std::size_t j = 0; j < out.projections.size(); ++j) {
        if (out.projections[j].empty())
            throw BaseShape("object " + c.objects[j + 1] + " has no projections");
        out.signature.arities.push_back(static_cast<std::uint32_t>(out.projections[j].size()));
    }
    return out;
}

Copresheaf to_copresheaf(const RelationalStructure& a) {
    auto rep = validate_structure(a);
    if (!rep.ok())
        throw ShapeError(rep.violations.front());
    Copresheaf out;
    out.shape = signature_category(a.signature);
    auto info = recognize_signature(*out.shape);
    out.sets.resize(out.shape->object_count());
    out.maps.resize(out.shape->morphism_count());
    out.sets[0] = make_set(a.domain);
    for (std::size_t j = 0; j < a.relations.size(); ++j) {
        NamedSet names;
        for (const auto& t : a.relations[j])
            names.push_back(tuple_name(a.domain, t));
        out.sets[j + 1] = make_set(std::move(names));
        for (std::uint32_t i = 0; i < a.signature.arities[j]; ++i) {
            auto& col = out.maps[info.projections[j][i]];
            col.resize(a.relations[j].size());
            for (std::size_t e = 0; e < a.relations[j].size(); ++e)
                col[e] = a.relations[j][e][i];
        }
    }
    for (std::uint32_t o = 0; o < out.shape->object_count(); ++o)
        out.maps[out.shape->identities[o]] = iota_map(out.sets[o]->size());
    return out;
}

RelationalStructure to_structure(const Copresheaf& a) {
    auto info = recognize_signature(*a.shape);
    RelationalStructure out;
    out.signature = info.signature;
    out.domain = *a.sets[0];
    out.relations.resize(info.signature.names.size());
    for (std::size_t j = 0; j < out.relations.size(); ++j) {
        auto& rel = out.relations[j];
        for (std::size_t e = 0; e < a.sets[j + 1]->size(); ++e) {
            std::vector<std::uint32_t> t;
            for (auto m : info.projections[j])
                t.push_back(a.maps[m][e]);
            rel.push_back(std::move(t));
        }
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    return out;
}

RelationalStructure single_sorted(const Copresheaf& a, std::size_t cap) {
    const FinCategory& s = *a.shape;
    std::size_t nobj = s.object_count();
    std::vector<std::uint64_t> sizes(nobj);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < nobj; ++i) {
        sizes[i] = a.sets[i]->size();
        total *= sizes[i];
        if (total > cap)
            throw SizeCap("single-sorted domain exceeds cap " + std::to_string(cap));
    }
    std::vector<std::vector<std::uint32_t>> tuples(total);
    RelationalStructure out;
    for (std::uint64_t p = 0; p < total; ++p) {
        auto& t = tuples[p];
        t.resize(nobj);
        std::uint64_t rem = p;
        for (std::size_t i = nobj; i-- > 0;) {
            t[i] = static_cast<std::uint32_t>(rem % sizes[i]);
            rem /= sizes[i];
        }
        std::string name = "(";
        for (std::size_t i = 0; i < nobj; ++i) {
            if (i)
                name += ",";
            name += a.sets[i]->at(t[i]);
        }
        out.domain.push_back(name + ")");
    }
    // every morphism gets a relation, identities included: the coordinate
    // equality they impose is what forces homs between encodings to act
    // coordinate-wise, so dropping them would inflate the polymorphism counts
    for (std::uint32_t m = 0; m < s.morphism_count(); ++m) {
        out.signature.names.push_back("E_" + s.morphisms[m].name);
        out.signature.arities.push_back(2);
        std::vector<std::vector<std::uint32_t>> rel;
        std::uint32_t src = s.morphisms[m].src, tgt = s.morphisms[m].tgt;
        for (std::uint32_t p = 0; p < total; ++p) {
            std::uint32_t image = a.maps[m][tuples[p][src]];
            for (std::uint32_t q = 0; q < total; ++q)
                if (tuples[q][tgt] == image)
                    rel.push_back({p, q});
        }
        out.relations.push_back(std::move(rel));
    }
    return out;
}

CanonicalResult canonical_structure_full(const PPFormula& phi, const RelationalSignature& sig) {
    if (!phi.bound_vars.empty())
        throw ShapeError("canonical structure requires a quantifier-free formula");
    std::size_t n = phi.free_vars.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& atom : phi.atoms) {
        for (auto v : atom.args)
            if (v >= n)
                throw ShapeError("atom variable out of range");
        switch (atom.kind) {
        case PPAtom::equality:
            if (atom.args.size() != 2)
                throw ShapeError("equality atoms are binary");
            // union by least index so class representatives stay canonical
            {
                std::uint32_t ra = find(atom.args[0]), rb = find(atom.args[1]);
                if (ra != rb)
                    parent[std::max(ra, rb)] = std::min(ra, rb);
            }
            break;
        case PPAtom::relation:
            if (atom.symbol >= sig.names.size())
                throw ShapeError("unknown relation symbol in atom");
            if (atom.args.size() != sig.arities[atom.symbol])
                throw ShapeError("arity mismatch in atom over " + sig.names[atom.symbol]);
            break;
        case PPAtom::functional:
            throw ShapeError("functional atom in a relational formula");
        }
    }
    CanonicalResult out;
    out.structure.signature = sig;
    out.var_class.assign(n, npos32);
    for (std::uint32_t v = 0; v < n; ++v)
        if (find(v) == v) {
            out.var_class[v] = static_cast<std::uint32_t>(out.structure.domain.size());
            out.structure.domain.push_back(phi.free_vars[v]);
        }
    for (std::uint32_t v = 0; v < n; ++v)
        out.var_class[v] = out.var_class[find(v)];
    out.structure.relations.resize(sig.names.size());
    for (const auto& atom : phi.atoms) {
        if (atom.kind != PPAtom::relation)
            continue;
        std::vector<std::uint32_t> t;
        for (auto v : atom.args)
            t.push_back(out.var_class[v]);
        out.structure.relations[atom.symbol].push_back(std::move(t));
    }
    for (auto& rel : out.structure.relations) {
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    return out;
}

RelationalStructure canonical_structure(const PPFormula& phi, const RelationalSignature& sig) {
    return canonical_structure_full(phi, sig).structure;
}

PPFormula canonical_formula(const RelationalStructure& c) {
    PPFormula out;
    out.free_vars = c.domain;
    for (std::uint32_t j = 0; j < c.relations.size(); ++j)
        for (const auto& t : c.relations[j])
            out.atoms.push_back({PPAtom::relation, j, t});
    // the empty conjunction is true; spell it x = x so the surface grammar,
    // which has no truth literal, can carry the formula
    if (out.atoms.empty() && !out.free_vars.empty())
        out.atoms.push_back({PPAtom::equality, 0, {0, 0}});
    return out;
}

CatFunctor pp_sentence_to_instance(const PPFormula& phi, const FinCategoryPtr& s) {
    if (!phi.free_vars.empty())
        throw ShapeError("a pp sentence has no free variables");
    std::size_t n = phi.bound_vars.size();
    std::vector<std::uint32_t> sort_of(n, npos32);
    auto assign_sort = [&](std::uint32_t v, std::uint32_t o) {
        if (sort_of[v] == npos32)
            sort_of[v] = o;
        else if (sort_of[v] != o)
            throw ShapeError("variable " + phi.bound_vars[v] + " is used at two sorts");
    };
    for (const auto& atom : phi.atoms) {
        if (atom.kind == PPAtom::equality)
            throw ShapeError("spell equality as an identity-morphism atom id(x) = y");
        if (atom.kind == PPAtom::relation)
            throw ShapeError("instance functors need functional atoms f(x) = y");
        if (atom.symbol >= s->morphism_count())
            throw UnknownMorphism("morphism index " + std::to_string(atom.symbol) +
                                  " out of range");
        if (atom.args.size() != 2)
            throw ShapeError("functional atoms take one input and one output");
        for (auto v : atom.args)
            if (v >= n)
                throw ShapeError("atom variable out of range");
        assign_sort(atom.args[0], s->morphisms[atom.symbol].src);
        assign_sort(atom.args[1], s->morphisms[atom.symbol].tgt);
    }
    for (std::size_t v = 0; v < n; ++v)
        if (sort_of[v] == npos32)
            throw ShapeError("variable " + phi.bound_vars[v] + " appears in no atom");

    // Variables plus a primed copy each; a single arrow x' -> x carrying the
    // identity, outgoing constraints from the primed copy, incoming to the
    // plain one.  No two non-identity arrows compose.
    FinCategory j;
    CatFunctor d;
    for (std::size_t v = 0; v < n; ++v)
        j.objects.push_back(phi.bound_vars[v]);
    for (std::size_t v = 0; v < n; ++v)
        j.objects.push_back(phi.bound_vars[v] + "'");
    for (std::uint32_t o = 0; o < 2 * n; ++o) {
        j.identities.push_back(static_cast<std::uint32_t>(j.morphisms.size()));
        j.morphisms.push_back({"id_" + j.objects[o], o, o});
        d.morphism_map.push_back(s->identities[sort_of[o % n]]);
        d.object_map.push_back(sort_of[o % n]);
    }
    for (std::uint32_t v = 0; v < n; ++v) {
        j.morphisms.push_back(
            {"c_" + phi.bound_vars[v], static_cast<std::uint32_t>(n + v), v});
        d.morphism_map.push_back(s->identities[sort_of[v]]);
    }
    for (std::size_t k = 0; k < phi.atoms.size(); ++k) {
        const auto& atom = phi.atoms[k];
        j.morphisms.push_back({"a" + std::to_string(k),
                               static_cast<std::uint32_t>(n + atom.args[0]), atom.args[1]});
        d.morphism_map.push_back(atom.symbol);
    }
    d.source = std::make_shared<FinCategory>(std::move(j));
    d.target = s;
    return d;
}

PPFormula instance_to_pp_sentence(const CatFunctor& d) {
    PPFormula out;
    out.bound_vars = d.source->objects;
    for (std::uint32_t m = 0; m < d.source->morphism_count(); ++m) {
        if (d.source->is_identity(m))
            continue;
        out.atoms.push_back({PPAtom::functional, d.morphism_map[m],
                             {d.source->morphisms[m].src, d.source->morphisms[m].tgt}});
    }
    return out;
}

GadgetFunctor ppinterp_to_gadget(const PPInterpretation& phi) {
    std::size_t n = phi.dimension;
    if (n == 0)
        throw ShapeError("interpretation dimension must be positive");
    if (phi.relation_formulas.size() != phi.target.names.size())
        throw ShapeError("one relation formula per target symbol");
    if (!phi.domain_formula.bound_vars.empty())
        throw ShapeError("the domain formula must be quantifier-free");
    if (phi.domain_formula.free_vars.size() != n)
        throw ShapeError("the domain formula needs exactly dimension-many free variables");

    GadgetFunctor g;
    g.shape = signature_category(phi.target);
    g.base = signature_category(phi.source);
    auto shape_info = recognize_signature(*g.shape);

    auto dres = canonical_structure_full(phi.domain_formula, phi.source);
    g.gadgets.resize(1 + phi.target.names.size());
    g.gadgets[0] = to_copresheaf(dres.structure);
    g.gadgets[0].shape = g.base;
    std::vector<CanonicalResult> rres(phi.target.names.size());
    for (std::size_t j = 0; j < phi.target.names.size(); ++j) {
        std::size_t k = phi.target.arities[j];
        PPFormula matrix = phi.relation_formulas[j];
        if (matrix.free_vars.size() != n * k)
            throw ShapeError("relation formula for " + phi.target.names[j] + " needs " +
                             std::to_string(n * k) + " free variables");
        matrix.free_vars.insert(matrix.free_vars.end(), matrix.bound_vars.begin(),
                                matrix.bound_vars.end());
        matrix.bound_vars.clear();
        rres[j] = canonical_structure_full(matrix, phi.source);
        g.gadgets[1 + j] = to_copresheaf(rres[j].structure);
        g.gadgets[1 + j].shape = g.base;
    }

    g.arrows.resize(g.shape->morphism_count());
    for (std::uint32_t o = 0; o < g.shape->object_count(); ++o) {
        NatTransformation id;
        for (const auto& set : g.gadgets[o].sets)
            id.components.push_back(iota_map(set->size()));
        g.arrows[g.shape->identities[o]] = std::move(id);
    }
    for (std::size_t j = 0; j < phi.target.names.size(); ++j) {
        std::size_t k = phi.target.arities[j];
        for (std::size_t i = 0; i < k; ++i) {
            // G(p_i): G(D) -> G(R), variable x_d to x_{i*n+d}; the containment
            // of the relation formula in the substituted domain formula is
            // what makes this a homomorphism, so failures surface here.
            NatTransformation t;
            std::vector<std::uint32_t> vmap(dres.structure.domain.size(), npos32);
            for (std::size_t d = 0; d < n; ++d) {
                std::uint32_t image = rres[j].var_class[i * n + d];
                std::uint32_t cls = dres.var_class[d];
                if (vmap[cls] != npos32 && vmap[cls] != image)
                    throw ShapeError("containment fails for " + phi.target.names[j] +
                                     ": a domain equality is not entailed at coordinate " +
                                     std::to_string(i + 1));
                vmap[cls] = image;
            }
            t.components.push_back(vmap);
            for (std::size_t sidx = 0; sidx < phi.source.names.size(); ++sidx) {
                const auto& dom_rel = dres.structure.relations[sidx];
                const auto& img_rel = rres[j].structure.relations[sidx];
                std::vector<std::uint32_t> comp(dom_rel.size());
                for (std::size_t e = 0; e < dom_rel.size(); ++e) {
                    std::vector<std::uint32_t> image;
                    for (auto v : dom_rel[e])
                        image.push_back(vmap[v]);
                    auto it = std::lower_bound(img_rel.begin(), img_rel.end(), image);
                    if (it == img_rel.end() || *it != image)
                        throw ShapeError("containment fails for " + phi.target.names[j] + ": a " +
                                         phi.source.names[sidx] +
                                         " atom of the domain formula is not entailed at "
                                         "coordinate " +
                                         std::to_string(i + 1));
                    comp[e] = static_cast<std::uint32_t>(it - img_rel.begin());
                }
                t.components.push_back(std::move(comp));
            }
            g.arrows[shape_info.projections[j][i]] = std::move(t);
        }
    }
    return g;
}

PPInterpretation gadget_to_ppinterp(const GadgetFunctor& g) {
    auto base_info = recognize_signature(*g.base);
    auto shape_info = recognize_signature(*g.shape);
    if (g.gadgets.size() != g.shape->object_count() ||
        g.arrows.size() != g.shape->morphism_count())
        throw ShapeError("gadget data does not match its shape");
    PPInterpretation out;
    out.source = base_info.signature;
    out.target = shape_info.signature;
    std::size_t n = g.gadgets[0].sets[0]->size();
    if (n == 0)
        throw ShapeError("the domain gadget needs a nonempty vertex set");
    out.dimension = static_cast<std::uint32_t>(n);

    auto atoms_of = [&](const Copresheaf& c, std::uint32_t shift) {
        std::vector<PPAtom> atoms;
        for (std::uint32_t sidx = 0; sidx < base_info.signature.names.size(); ++sidx) {
            std::set<std::vector<std::uint32_t>> seen;
            for (std::size_t e = 0; e < c.sets[sidx + 1]->size(); ++e) {
                std::vector<std::uint32_t> t;
                for (auto m : base_info.projections[sidx])
                    t.push_back(shift + c.maps[m][e]);
                if (seen.insert(t).second)
                    atoms.push_back({PPAtom::relation, sidx, std::move(t)});
            }
        }
        return atoms;
    };

    for (std::size_t d = 0; d < n; ++d)
        out.domain_formula.free_vars.push_back("x" + std::to_string(d + 1));
    out.domain_formula.atoms = atoms_of(g.gadgets[0], 0);
    // a relation-free domain gadget means the domain formula is true; the
    // surface grammar has no truth literal, so spell it x1 = x1
    if (out.domain_formula.atoms.empty())
        out.domain_formula.atoms.push_back({PPAtom::equality, 0, {0, 0}});

    for (std::size_t j = 0; j < out.target.names.size(); ++j) {
        std::size_t k = out.target.arities[j];
        const Copresheaf& gr_j = g.gadgets[1 + j];
        PPFormula f;
        for (std::size_t i = 0; i < n * k; ++i)
            f.free_vars.push_back("x" + std::to_string(i + 1));
        for (std::size_t b = 0; b < gr_j.sets[0]->size(); ++b)
            f.bound_vars.push_back("y" + std::to_string(b + 1));
        f.atoms = atoms_of(gr_j, static_cast<std::uint32_t>(n * k));
        for (std::size_t i = 0; i < k; ++i) {
            const auto& vmap = g.arrows[shape_info.projections[j][i]].components[0];
            for (std::size_t d = 0; d < n; ++d)
                f.atoms.push_back({PPAtom::equality, 0,
                                   {static_cast<std::uint32_t>(i * n + d),
                                    static_cast<std::uint32_t>(n * k + vmap[d])}});
        }
        out.relation_formulas.push_back(std::move(f));
    }
    return out;
}

}
