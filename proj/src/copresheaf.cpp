#include "cspcat/copresheaf.hpp"

#include <algorithm>

#include "cspcat/grothendieck.hpp"

namespace cspcat {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::size_t cap) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && out > static_cast<std::uint64_t>(cap) / base)
            throw SizeCap("a component of size " + std::to_string(base) + "^" + std::to_string(exp) +
                          " exceeds the cap of " + std::to_string(cap));
        out *= base;
    }
    if (out > cap)
        throw SizeCap("a component of size " + std::to_string(base) + "^" + std::to_string(exp) +
                      " exceeds the cap of " + std::to_string(cap));
    return out;
}

void decode_tuple(std::uint64_t index, std::uint32_t radix, std::uint32_t length,
                  std::vector<std::uint32_t>& out) {
    out.assign(length, 0);
    for (std::uint32_t i = length; i-- > 0;) {
        out[i] = static_cast<std::uint32_t>(index % radix);
        index /= radix;
    }
}

std::uint64_t encode_tuple(const std::vector<std::uint32_t>& tuple, std::uint32_t radix) {
    std::uint64_t out = 0;
    for (std::uint32_t v : tuple)
        out = out * radix + v;
    return out;
}

HomResult hom(const Copresheaf& x, const Copresheaf& a, SolveMode mode) {
    if (!same_category(x.shape, a.shape))
        throw BaseMismatch("the two copresheaves do not live over the same base category");

    ElementsCategory elems = gr(x);
    FinDiagram instance = compose_diagram(a, elems.projection);
    LimitResult lim = limit(instance, mode);

    HomResult result;
    result.nonempty = lim.nonempty;
    result.count = lim.count;
    for (const auto& sol : lim.solutions) {
        NatTransformation h;
        h.components.resize(x.sets.size());
        for (std::uint32_t s = 0; s < x.sets.size(); ++s) {
            h.components[s].resize(x.sets[s]->size());
            for (std::uint32_t e = 0; e < x.sets[s]->size(); ++e)
                h.components[s][e] = sol[elems.object_at(s, e)];
        }
        result.transformations.push_back(std::move(h));
    }
    return result;
}

ValidationReport check_naturality(const Copresheaf& x, const Copresheaf& a,
                                  const NatTransformation& h) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };
    if (!same_category(x.shape, a.shape)) {
        complain("base categories differ");
        return report;
    }
    const FinCategory& base = *x.shape;
    if (h.components.size() != x.sets.size()) {
        complain("transformation does not have one component per base object");
        return report;
    }
    for (std::uint32_t s = 0; s < x.sets.size(); ++s) {
        if (h.components[s].size() != x.sets[s]->size()) {
            complain("component at " + base.objects[s] + " is not total");
            return report;
        }
        for (std::uint32_t v : h.components[s])
            if (v >= a.sets[s]->size()) {
                complain("component at " + base.objects[s] + " has an out-of-range value");
                return report;
            }
    }
    for (std::uint32_t m = 0; m < base.morphism_count(); ++m) {
        if (base.is_identity(m))
            continue;
        std::uint32_t s = base.morphisms[m].src, t = base.morphisms[m].tgt;
        for (std::uint32_t e = 0; e < x.sets[s]->size(); ++e)
            if (a.maps[m][h.components[s][e]] != h.components[t][x.maps[m][e]]) {
                complain("naturality square for " + base.morphisms[m].name + " fails at element " +
                         (*x.sets[s])[e]);
                break;
            }
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

Copresheaf power(const Copresheaf& a, const NamedSet& n, std::size_t cap) {
    const FinCategory& base = *a.shape;
    std::uint32_t k = static_cast<std::uint32_t>(n.size());
    Copresheaf p;
    p.shape = a.shape;
    p.sets.resize(base.object_count());
    p.maps.resize(base.morphism_count());

    std::vector<std::uint64_t> sizes(base.object_count());
    for (std::uint32_t s = 0; s < base.object_count(); ++s) {
        sizes[s] = checked_pow(a.sets[s]->size(), k, cap);
        NamedSet names;
        names.reserve(sizes[s]);
        std::vector<std::uint32_t> tuple;
        for (std::uint64_t idx = 0; idx < sizes[s]; ++idx) {
            decode_tuple(idx, static_cast<std::uint32_t>(a.sets[s]->size()), k, tuple);
            std::string name = "(";
            for (std::uint32_t i = 0; i < k; ++i) {
                if (i)
                    name += ",";
                name += (*a.sets[s])[tuple[i]];
            }
            name += ")";
            names.push_back(std::move(name));
        }
        p.sets[s] = make_set(std::move(names));
    }
    for (std::uint32_t m = 0; m < base.morphism_count(); ++m) {
        std::uint32_t s = base.morphisms[m].src, t = base.morphisms[m].tgt;
        std::uint32_t rs = static_cast<std::uint32_t>(a.sets[s]->size());
        std::uint32_t rt = static_cast<std::uint32_t>(a.sets[t]->size());
        p.maps[m].resize(sizes[s]);
        std::vector<std::uint32_t> tuple;
        for (std::uint64_t idx = 0; idx < sizes[s]; ++idx) {
            decode_tuple(idx, rs, k, tuple);
            for (auto& v : tuple)
                v = a.maps[m][v];
            p.maps[m][idx] = static_cast<std::uint32_t>(encode_tuple(tuple, rt));
        }
    }
    return p;
}

Copresheaf yoneda(const FinCategoryPtr& base, std::uint32_t s) {
    const FinCategory& c = *base;
    Copresheaf y;
    y.shape = base;
    y.sets.resize(c.object_count());
    y.maps.resize(c.morphism_count());

    std::vector<std::vector<std::uint32_t>> hom_sets(c.object_count());
    std::vector<std::uint32_t> position(c.morphism_count(), npos32);
    for (std::uint32_t t = 0; t < c.object_count(); ++t) {
        hom_sets[t] = c.hom_set(s, t);
        NamedSet names;
        for (std::uint32_t i = 0; i < hom_sets[t].size(); ++i) {
            position[hom_sets[t][i]] = i;
            names.push_back(c.morphisms[hom_sets[t][i]].name);
        }
        y.sets[t] = make_set(std::move(names));
    }
    for (std::uint32_t u = 0; u < c.morphism_count(); ++u) {
        std::uint32_t t = c.morphisms[u].src;
        y.maps[u].resize(hom_sets[t].size());
        for (std::uint32_t i = 0; i < hom_sets[t].size(); ++i)
            y.maps[u][i] = position[c.compose(u, hom_sets[t][i])];
    }
    return y;
}

FinDiagram compose_diagram(const Copresheaf& a, const CatFunctor& d) {
    if (!same_category(d.target, a.shape))
        throw BaseMismatch("instance functor does not land in the copresheaf's base");
    FinDiagram out;
    out.shape = d.source;
    out.sets.reserve(d.object_map.size());
    for (std::uint32_t obj : d.object_map)
        out.sets.push_back(a.sets[obj]);
    out.maps.reserve(d.morphism_map.size());
    for (std::uint32_t m : d.morphism_map)
        out.maps.push_back(a.maps[m]);
    return out;
}

bool hom_equivalent(const Copresheaf& a, const Copresheaf& b) {
    return hom(a, b, SolveMode::decide).nonempty && hom(b, a, SolveMode::decide).nonempty;
}

namespace {

// Backtracking over elements in canonical order with componentwise
// injectivity; every naturality square is checked as soon as both of its
// endpoints are assigned.
struct IsoSearch {
    const Copresheaf& a;
    const Copresheaf& b;
    const FinCategory& base;
    std::vector<std::vector<std::uint32_t>> image;  // a-element -> b-element or npos32
    std::vector<std::vector<char>> used;

    IsoSearch(const Copresheaf& a_, const Copresheaf& b_)
        : a(a_), b(b_), base(*a_.shape) {
        image.resize(a.sets.size());
        used.resize(a.sets.size());
        for (std::uint32_t s = 0; s < a.sets.size(); ++s) {
            image[s].assign(a.sets[s]->size(), npos32);
            used[s].assign(b.sets[s]->size(), 0);
        }
    }

    bool consistent(std::uint32_t s, std::uint32_t x, std::uint32_t y) const {
        for (std::uint32_t m = 0; m < base.morphism_count(); ++m) {
            if (base.is_identity(m))
                continue;
            std::uint32_t ms = base.morphisms[m].src, mt = base.morphisms[m].tgt;
            if (ms == s) {
                std::uint32_t xt = a.maps[m][x];
                if (image[mt][xt] != npos32 && b.maps[m][y] != image[mt][xt])
                    return false;
            }
            if (mt == s) {
                for (std::uint32_t e = 0; e < a.sets[ms]->size(); ++e)
                    if (a.maps[m][e] == x && image[ms][e] != npos32 && b.maps[m][image[ms][e]] != y)
                        return false;
            }
        }
        return true;
    }

    bool search(std::uint32_t s, std::uint32_t x) {
        while (s < a.sets.size() && x >= a.sets[s]->size()) {
            ++s;
            x = 0;
        }
        if (s == a.sets.size())
            return true;
        for (std::uint32_t y = 0; y < b.sets[s]->size(); ++y) {
            if (used[s][y] || !consistent(s, x, y))
                continue;
            image[s][x] = y;
            used[s][y] = 1;
            if (search(s, x + 1))
                return true;
            image[s][x] = npos32;
            used[s][y] = 0;
        }
        return false;
    }
};

}

std::optional<NatTransformation> find_isomorphism(const Copresheaf& a, const Copresheaf& b) {
    if (!same_category(a.shape, b.shape))
        throw BaseMismatch("isomorphism check needs a common base category");
    for (std::uint32_t s = 0; s < a.sets.size(); ++s)
        if (a.sets[s]->size() != b.sets[s]->size())
            return std::nullopt;
    IsoSearch search(a, b);
    if (!search.search(0, 0))
        return std::nullopt;
    NatTransformation h;
    h.components = std::move(search.image);
    return h;
}

bool isomorphic(const Copresheaf& a, const Copresheaf& b) {
    return find_isomorphism(a, b).has_value();
}

bool equal_copresheaves(const Copresheaf& a, const Copresheaf& b) {
    if (!same_category(a.shape, b.shape) || a.sets.size() != b.sets.size())
        return false;
    for (std::uint32_t s = 0; s < a.sets.size(); ++s)
        if (*a.sets[s] != *b.sets[s])
            return false;
    return a.maps == b.maps;
}

NatTransformation compose_transformations(const Copresheaf& x, const NatTransformation& first,
                                          const NatTransformation& then) {
    NatTransformation out;
    out.components.resize(x.sets.size());
    for (std::uint32_t s = 0; s < x.sets.size(); ++s) {
        out.components[s].resize(x.sets[s]->size());
        for (std::uint32_t e = 0; e < x.sets[s]->size(); ++e)
            out.components[s][e] = then.components[s][first.components[s][e]];
    }
    return out;
}

std::vector<std::uint32_t> flatten_transformation(const NatTransformation& h) {
    std::vector<std::uint32_t> out;
    for (const auto& comp : h.components)
        out.insert(out.end(), comp.begin(), comp.end());
    return out;
}

}
