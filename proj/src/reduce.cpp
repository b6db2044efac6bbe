#include "cspcat/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace cspcat {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (b < a)
            std::swap(a, b);
        parent[b] = a;
    }
};

}

TemplatePair template_pair(Copresheaf a, Copresheaf b) {
    if (!same_category(a.shape, b.shape))
        throw BaseMismatch("the two templates do not live over the same base category");
    HomResult hr = hom(a, b, SolveMode::decide);
    if (!hr.nonempty)
        throw PromiseViolation("the strict template has no homomorphism to the relaxed one");
    return {std::move(a), std::move(b), std::move(hr.transformations.front())};
}

UniversalReducer universal_reducer(TemplatePair src, TemplatePair dst, std::size_t cap) {
    UniversalReducer r;
    r.src = std::move(src);
    r.dst = std::move(dst);
    r.cap = cap;
    const FinCategory& sb = *r.src.a.shape;
    const FinCategory& tb = *r.dst.a.shape;
    std::uint32_t ns = static_cast<std::uint32_t>(sb.object_count());
    std::uint32_t nt = static_cast<std::uint32_t>(tb.object_count());

    r.pow.assign(ns, std::vector<std::uint64_t>(nt));
    for (std::uint32_t s = 0; s < ns; ++s)
        for (std::uint32_t t = 0; t < nt; ++t)
            r.pow[s][t] = checked_pow(r.dst.a.sets[t]->size(), r.src.a.sets[s]->size(), cap);

    std::vector<std::uint32_t> g, x;
    r.reindex.resize(sb.morphism_count());
    for (std::uint32_t u = 0; u < sb.morphism_count(); ++u) {
        if (sb.is_identity(u))
            continue;
        std::uint32_t s = sb.morphisms[u].src, s2 = sb.morphisms[u].tgt;
        r.reindex[u].resize(nt);
        for (std::uint32_t t = 0; t < nt; ++t) {
            std::uint32_t radix = static_cast<std::uint32_t>(r.dst.a.sets[t]->size());
            auto& tab = r.reindex[u][t];
            tab.resize(r.pow[s2][t]);
            for (std::uint64_t code = 0; code < r.pow[s2][t]; ++code) {
                decode_tuple(code, radix, static_cast<std::uint32_t>(r.src.a.sets[s2]->size()), g);
                x.resize(r.src.a.sets[s]->size());
                for (std::uint32_t e = 0; e < x.size(); ++e)
                    x[e] = g[r.src.a.maps[u][e]];
                tab[code] = static_cast<std::uint32_t>(encode_tuple(x, radix));
            }
        }
    }

    r.post.resize(tb.morphism_count());
    for (std::uint32_t v = 0; v < tb.morphism_count(); ++v) {
        if (tb.is_identity(v))
            continue;
        std::uint32_t t = tb.morphisms[v].src, t2 = tb.morphisms[v].tgt;
        r.post[v].resize(ns);
        for (std::uint32_t s = 0; s < ns; ++s) {
            std::uint32_t radix = static_cast<std::uint32_t>(r.dst.a.sets[t]->size());
            std::uint32_t radix2 = static_cast<std::uint32_t>(r.dst.a.sets[t2]->size());
            auto& tab = r.post[v][s];
            tab.resize(r.pow[s][t]);
            for (std::uint64_t code = 0; code < r.pow[s][t]; ++code) {
                decode_tuple(code, radix, static_cast<std::uint32_t>(r.src.a.sets[s]->size()), g);
                for (auto& e : g)
                    e = r.dst.a.maps[v][e];
                tab[code] = static_cast<std::uint32_t>(encode_tuple(g, radix2));
            }
        }
    }
    return r;
}

Copresheaf UniversalReducer::apply(const Copresheaf& x) const {
    if (!same_category(x.shape, src.a.shape))
        throw BaseMismatch("the instance does not live over the source base");
    const FinCategory& sb = *src.a.shape;
    const FinCategory& tb = *dst.a.shape;
    std::uint32_t ns = static_cast<std::uint32_t>(sb.object_count());
    std::uint32_t nt = static_cast<std::uint32_t>(tb.object_count());

    // Nodes are the elements of x in (base object, element) order, matching
    // the object order of gr(x).
    std::vector<std::uint32_t> node_off(ns + 1, 0);
    for (std::uint32_t s = 0; s < ns; ++s)
        node_off[s + 1] = node_off[s] + static_cast<std::uint32_t>(x.sets[s]->size());
    std::uint32_t n_nodes = node_off[ns];
    std::vector<std::uint32_t> node_base(n_nodes), node_elem(n_nodes);
    for (std::uint32_t s = 0; s < ns; ++s)
        for (std::uint32_t v = 0; v < x.sets[s]->size(); ++v) {
            node_base[node_off[s] + v] = s;
            node_elem[node_off[s] + v] = v;
        }

    Copresheaf out;
    out.shape = dst.a.shape;
    out.sets.resize(nt);
    out.maps.resize(tb.morphism_count());
    std::vector<std::vector<std::uint64_t>> ofs(nt);
    std::vector<std::vector<std::uint32_t>> inj(nt);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> reps(nt);

    std::vector<std::uint32_t> tuple;
    for (std::uint32_t t = 0; t < nt; ++t) {
        auto& o = ofs[t];
        o.assign(n_nodes + 1, 0);
        for (std::uint32_t nd = 0; nd < n_nodes; ++nd)
            o[nd + 1] = o[nd] + pow[node_base[nd]][t];
        UnionFind uf(static_cast<std::size_t>(o[n_nodes]));
        for (std::uint32_t u = 0; u < sb.morphism_count(); ++u) {
            if (sb.is_identity(u))
                continue;
            std::uint32_t s = sb.morphisms[u].src, s2 = sb.morphisms[u].tgt;
            const auto& tab = reindex[u][t];
            for (std::uint32_t v = 0; v < x.sets[s]->size(); ++v) {
                std::uint64_t from = o[node_off[s2] + x.maps[u][v]];
                std::uint64_t to = o[node_off[s] + v];
                for (std::uint64_t code = 0; code < tab.size(); ++code)
                    uf.unite(static_cast<std::uint32_t>(from + code),
                             static_cast<std::uint32_t>(to + tab[code]));
            }
        }
        std::uint32_t radix = static_cast<std::uint32_t>(dst.a.sets[t]->size());
        NamedSet names;
        inj[t].assign(o[n_nodes], npos32);
        std::vector<std::uint32_t> class_of(o[n_nodes], npos32);
        for (std::uint32_t nd = 0; nd < n_nodes; ++nd) {
            std::uint32_t s = node_base[nd];
            std::string node_name =
                element_object_name(sb.objects[s], (*x.sets[s])[node_elem[nd]]);
            std::uint32_t len = static_cast<std::uint32_t>(src.a.sets[s]->size());
            for (std::uint64_t code = 0; code < pow[s][t]; ++code) {
                std::uint32_t root = uf.find(static_cast<std::uint32_t>(o[nd] + code));
                if (class_of[root] == npos32) {
                    class_of[root] = static_cast<std::uint32_t>(reps[t].size());
                    reps[t].emplace_back(nd, static_cast<std::uint32_t>(code));
                    decode_tuple(code, radix, len, tuple);
                    names.push_back("(" + node_name + "," +
                                    function_tuple_name(*dst.a.sets[t], tuple) + ")");
                }
                inj[t][o[nd] + code] = class_of[root];
            }
        }
        out.sets[t] = make_set(std::move(names));
    }

    for (std::uint32_t v = 0; v < tb.morphism_count(); ++v) {
        std::uint32_t t = tb.morphisms[v].src, t2 = tb.morphisms[v].tgt;
        out.maps[v].resize(reps[t].size());
        if (tb.is_identity(v)) {
            std::iota(out.maps[v].begin(), out.maps[v].end(), 0);
            continue;
        }
        for (std::uint32_t cls = 0; cls < reps[t].size(); ++cls) {
            auto [nd, code] = reps[t][cls];
            out.maps[v][cls] = inj[t2][ofs[t2][nd] + post[v][node_base[nd]][code]];
        }
    }
    return out;
}

Copresheaf universal_reduction(const TemplatePair& src, const TemplatePair& dst,
                               const Copresheaf& x, std::size_t cap) {
    return universal_reducer(src, dst, cap).apply(x);
}

Copresheaf universal_reduction_via_lan(const TemplatePair& src, const TemplatePair& dst,
                                       const Copresheaf& x, std::size_t cap) {
    if (!same_category(x.shape, src.a.shape))
        throw BaseMismatch("the instance does not live over the source base");
    ElementsCategory elems = gr(x);
    FinDiagram d = compose_diagram(src.a, elems.projection);
    const FinCategory& tb = *dst.a.shape;

    Copresheaf out;
    out.shape = dst.a.shape;
    out.sets.resize(tb.object_count());
    out.maps.resize(tb.morphism_count());
    std::vector<LanValue> lv(tb.object_count());
    for (std::uint32_t t = 0; t < tb.object_count(); ++t) {
        lv[t] = lan_value(d, *dst.a.sets[t], cap);
        out.sets[t] = lv[t].carrier;
    }
    std::vector<std::uint32_t> g;
    for (std::uint32_t v = 0; v < tb.morphism_count(); ++v) {
        std::uint32_t t = tb.morphisms[v].src, t2 = tb.morphisms[v].tgt;
        out.maps[v].resize(lv[t].carrier->size());
        if (tb.is_identity(v)) {
            std::iota(out.maps[v].begin(), out.maps[v].end(), 0);
            continue;
        }
        std::uint32_t radix = static_cast<std::uint32_t>(dst.a.sets[t]->size());
        std::uint32_t radix2 = static_cast<std::uint32_t>(dst.a.sets[t2]->size());
        for (std::uint32_t cls = 0; cls < lv[t].carrier->size(); ++cls) {
            auto [j, gcode] = lv[t].representatives[cls];
            decode_tuple(gcode, radix, static_cast<std::uint32_t>(d.sets[j]->size()), g);
            for (auto& e : g)
                e = dst.a.maps[v][e];
            out.maps[v][cls] =
                lv[t2].injections[j][static_cast<std::uint32_t>(encode_tuple(g, radix2))];
        }
    }
    return out;
}

Copresheaf gadget_reduce(const GadgetFunctor& g, const Copresheaf& x) {
    return yoneda_extend(g, x);
}

namespace {

Verdict verdict_of(const Copresheaf& inst, const TemplatePair& p, bool same_templates) {
    if (hom(inst, p.a, SolveMode::decide).nonempty)
        return Verdict::yes;
    if (same_templates || !hom(inst, p.b, SolveMode::decide).nonempty)
        return Verdict::no;
    return Verdict::neither;
}

Classification classify(Verdict input, Verdict output) {
    switch (input) {
    case Verdict::yes:
        return output == Verdict::yes ? Classification::sound : Classification::violation;
    case Verdict::no:
        return output == Verdict::no ? Classification::complete : Classification::violation;
    case Verdict::neither:
        break;
    }
    return Classification::outside_promise;
}

}

ReductionReport harness(const std::vector<std::pair<std::string, Copresheaf>>& corpus,
                        const TemplatePair& pair_src, const TemplatePair& pair_dst,
                        const Reduction& reduction, const std::string& assertion) {
    ReductionReport report;
    report.assertion = assertion;
    report.instances.resize(corpus.size());
    bool src_same = equal_copresheaves(pair_src.a, pair_src.b);
    bool dst_same = equal_copresheaves(pair_dst.a, pair_dst.b);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= corpus.size())
                return;
            try {
                InstanceReport& r = report.instances[i];
                r.name = corpus[i].first;
                r.input = verdict_of(corpus[i].second, pair_src, src_same);
                Copresheaf image = reduction(corpus[i].second);
                r.output = verdict_of(image, pair_dst, dst_same);
                r.classification = classify(r.input, r.output);
            } catch (...) {
                std::lock_guard<std::mutex> hold(failure_lock);
                if (!failure)
                    failure = std::current_exception();
                next.store(corpus.size());
                return;
            }
        }
    };
    std::size_t n_threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, std::max<std::size_t>(1, corpus.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i + 1 < n_threads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);

    for (const auto& r : report.instances) {
        if (r.classification == Classification::violation)
            ++report.violations;
        if (r.classification == Classification::outside_promise)
            ++report.outside;
    }
    return report;
}

Copresheaf multidigraph(std::uint32_t vertices,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    auto base = digraph_category();
    Copresheaf x;
    x.shape = base;
    x.sets.resize(base->object_count());
    x.maps.resize(base->morphism_count());
    std::uint32_t v_obj = base->object_index("V"), e_obj = base->object_index("E");
    x.sets[v_obj] = numbered_set(vertices);
    x.sets[e_obj] = numbered_set(edges.size(), "e");
    auto& smap = x.maps[base->morphism_index("s")];
    auto& tmap = x.maps[base->morphism_index("t")];
    for (const auto& [a, b] : edges) {
        if (a >= vertices || b >= vertices)
            throw ShapeError("edge endpoint out of range");
        smap.push_back(a);
        tmap.push_back(b);
    }
    for (std::uint32_t o = 0; o < base->object_count(); ++o) {
        auto& idmap = x.maps[base->identities[o]];
        idmap.resize(x.sets[o]->size());
        std::iota(idmap.begin(), idmap.end(), 0);
    }
    return x;
}

std::vector<std::pair<std::string, Copresheaf>> all_multidigraphs(std::uint32_t max_vertices,
                                                                  std::uint32_t max_edges) {
    std::vector<std::pair<std::string, Copresheaf>> corpus;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t n = 0; n <= max_vertices; ++n) {
        std::uint32_t n_pairs = n * n;
        // Edge lists are non-decreasing sequences of pair codes, one per
        // multiset of edges.
        auto emit = [&]() {
            std::string name = "g" + std::to_string(n) + "[";
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (i)
                    name += ",";
                name += std::to_string(edges[i].first) + ">" + std::to_string(edges[i].second);
            }
            corpus.emplace_back(name + "]", multidigraph(n, edges));
        };
        auto extend = [&](auto&& self, std::uint32_t least) -> void {
            emit();
            if (edges.size() == max_edges)
                return;
            for (std::uint32_t code = least; code < n_pairs; ++code) {
                edges.emplace_back(code / n, code % n);
                self(self, code);
                edges.pop_back();
            }
        };
        extend(extend, 0);
    }
    return corpus;
}

Copresheaf random_multidigraph(std::uint64_t seed, std::uint32_t max_vertices,
                               std::uint32_t max_edges) {
    std::mt19937_64 rng(seed);
    std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(1, max_vertices)(rng);
    std::uint32_t m = std::uniform_int_distribution<std::uint32_t>(0, max_edges)(rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < m; ++i)
        edges.emplace_back(pick(rng), pick(rng));
    return multidigraph(n, edges);
}

}
