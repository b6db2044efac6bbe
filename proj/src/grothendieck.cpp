#include "cspcat/grothendieck.hpp"

namespace cspcat {

std::string element_object_name(const std::string& object, const std::string& element) {
    return "(" + object + "," + element + ")";
}

ElementsCategory gr(const Copresheaf& x) {
    const FinCategory& base = *x.shape;
    ElementsCategory e;
    auto cat = std::make_shared<FinCategory>();

    e.object_offsets.resize(base.object_count() + 1, 0);
    for (std::uint32_t s = 0; s < base.object_count(); ++s) {
        e.object_offsets[s + 1] = e.object_offsets[s] + static_cast<std::uint32_t>(x.sets[s]->size());
        for (std::uint32_t v = 0; v < x.sets[s]->size(); ++v) {
            cat->objects.push_back(element_object_name(base.objects[s], (*x.sets[s])[v]));
            e.element_of.emplace_back(s, v);
        }
    }
    std::uint32_t n_objects = e.object_offsets.back();

    e.projection.object_map.resize(n_objects);
    for (std::uint32_t o = 0; o < n_objects; ++o)
        e.projection.object_map[o] = e.element_of[o].first;

    // Identities first, then the arrows (f, x) grouped by base morphism.
    cat->identities.resize(n_objects);
    for (std::uint32_t o = 0; o < n_objects; ++o) {
        cat->identities[o] = o;
        cat->morphisms.push_back({"id_" + cat->objects[o], o, o});
        e.projection.morphism_map.push_back(base.identities[e.element_of[o].first]);
    }
    e.morphism_offsets.assign(base.morphism_count(), npos32);
    for (std::uint32_t f = 0; f < base.morphism_count(); ++f) {
        if (base.is_identity(f))
            continue;
        std::uint32_t s = base.morphisms[f].src, t = base.morphisms[f].tgt;
        e.morphism_offsets[f] = static_cast<std::uint32_t>(cat->morphisms.size());
        for (std::uint32_t v = 0; v < x.sets[s]->size(); ++v) {
            cat->morphisms.push_back({base.morphisms[f].name + "[" + (*x.sets[s])[v] + "]",
                                      e.object_at(s, v), e.object_at(t, x.maps[f][v])});
            e.projection.morphism_map.push_back(f);
        }
    }

    // An arrow over f starting at x composes with an arrow over g starting at
    // X(f)(x) to the arrow over g.f starting at x.
    auto arrow_at = [&](std::uint32_t f, std::uint32_t v) -> std::uint32_t {
        if (base.is_identity(f))
            return cat->identities[e.object_at(base.morphisms[f].src, v)];
        return e.morphism_offsets[f] + v;
    };
    for (std::uint32_t f = 0; f < base.morphism_count(); ++f) {
        if (base.is_identity(f))
            continue;
        for (std::uint32_t g = 0; g < base.morphism_count(); ++g) {
            if (base.is_identity(g) || base.morphisms[g].src != base.morphisms[f].tgt)
                continue;
            std::uint32_t h = base.compose(g, f);
            for (std::uint32_t v = 0; v < x.sets[base.morphisms[f].src]->size(); ++v) {
                std::uint32_t gf = arrow_at(g, x.maps[f][v]);
                std::uint32_t ff = arrow_at(f, v);
                std::uint32_t hh = arrow_at(h, v);
                if (!cat->is_identity(gf) && !cat->is_identity(ff))
                    cat->composites.emplace(FinCategory::pair_key(gf, ff), hh);
            }
        }
    }

    e.category = cat;
    e.projection.source = cat;
    e.projection.target = x.shape;
    return e;
}

FinDiagram template_condition(const Copresheaf& a, const Copresheaf& i) {
    if (!same_category(a.shape, i.shape))
        throw BaseMismatch("template and instance do not live over the same base category");
    return compose_diagram(a, gr(i).projection);
}

Copresheaf gl(const CatFunctor& d) {
    const FinCategory& j = *d.source;
    const FinCategory& s = *d.target;
    auto j_op = std::make_shared<FinCategory>(opposite(j));

    // Position of each base morphism inside its hom set, and shared name sets
    // for the hom sets themselves.
    std::vector<std::uint32_t> position(s.morphism_count(), npos32);
    std::vector<std::vector<std::vector<std::uint32_t>>> homs(s.object_count());
    std::vector<std::vector<NamedSetPtr>> hom_names(s.object_count());
    for (std::uint32_t a = 0; a < s.object_count(); ++a) {
        homs[a].resize(s.object_count());
        hom_names[a].resize(s.object_count());
        for (std::uint32_t b = 0; b < s.object_count(); ++b) {
            homs[a][b] = s.hom_set(a, b);
            NamedSet names;
            for (std::uint32_t i = 0; i < homs[a][b].size(); ++i) {
                position[homs[a][b][i]] = i;
                names.push_back(s.morphisms[homs[a][b][i]].name);
            }
            hom_names[a][b] = make_set(std::move(names));
        }
    }

    Copresheaf out;
    out.shape = d.target;
    out.sets.resize(s.object_count());
    out.maps.resize(s.morphism_count());
    std::vector<QuotientSet> quotients(s.object_count());

    for (std::uint32_t t = 0; t < s.object_count(); ++t) {
        FinDiagram diagram;
        diagram.shape = j_op;
        diagram.sets.resize(j.object_count());
        diagram.maps.resize(j.morphism_count());
        for (std::uint32_t i = 0; i < j.object_count(); ++i)
            diagram.sets[i] = hom_names[d.object_map[i]][t];
        for (std::uint32_t m = 0; m < j.morphism_count(); ++m) {
            // In the opposite shape the arrow for f: i -> j precomposes with D(f).
            std::uint32_t src_obj = d.object_map[j.morphisms[m].tgt];
            std::uint32_t tgt_obj = d.object_map[j.morphisms[m].src];
            const auto& from = homs[src_obj][t];
            diagram.maps[m].resize(from.size());
            for (std::uint32_t g = 0; g < from.size(); ++g)
                diagram.maps[m][g] = position[s.compose(from[g], d.morphism_map[m])];
            (void)tgt_obj;
        }
        quotients[t] = colimit(diagram);
        out.sets[t] = quotients[t].carrier;
    }

    for (std::uint32_t u = 0; u < s.morphism_count(); ++u) {
        std::uint32_t t = s.morphisms[u].src, t2 = s.morphisms[u].tgt;
        out.maps[u].resize(quotients[t].carrier->size());
        for (std::uint32_t cls = 0; cls < quotients[t].carrier->size(); ++cls) {
            auto [i, gpos] = quotients[t].representatives[cls];
            std::uint32_t g = homs[d.object_map[i]][t][gpos];
            std::uint32_t composed = s.compose(u, g);
            out.maps[u][cls] = quotients[t2].injections[i][position[composed]];
        }
    }
    return out;
}

}
