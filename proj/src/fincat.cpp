#include "cspcat/fincat.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace cspcat {

namespace {

std::string morph_ref(const FinCategory& c, std::uint32_t m) {
    std::ostringstream out;
    out << c.morphisms[m].name << " (#" << m << ")";
    return out.str();
}

}

ValidationReport validate_category(const FinCategory& c) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

    if (c.identities.size() != c.objects.size()) {
        complain("identity table size does not match object count");
        return report;
    }
    for (std::uint32_t m = 0; m < c.morphisms.size(); ++m) {
        if (c.morphisms[m].src >= c.objects.size() || c.morphisms[m].tgt >= c.objects.size())
            complain("morphism " + morph_ref(c, m) + " has an out-of-range endpoint");
    }
    if (!report.ok())
        return report;

    for (std::uint32_t x = 0; x < c.objects.size(); ++x) {
        std::uint32_t id = c.identities[x];
        if (id >= c.morphisms.size()) {
            complain("identity of " + c.objects[x] + " is out of range");
            continue;
        }
        if (c.morphisms[id].src != x || c.morphisms[id].tgt != x)
            complain("identity of " + c.objects[x] + " is not an endomorphism of it");
    }
    if (!report.ok())
        return report;

    for (const auto& [key, h] : c.composites) {
        std::uint32_t g = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t f = static_cast<std::uint32_t>(key & 0xffffffffu);
        if (g >= c.morphisms.size() || f >= c.morphisms.size() || h >= c.morphisms.size()) {
            complain("composite entry refers to an out-of-range morphism");
            continue;
        }
        if (c.is_identity(g) || c.is_identity(f))
            complain("composite table stores an identity pair explicitly: " + morph_ref(c, g) + " . " + morph_ref(c, f));
        if (c.morphisms[f].tgt != c.morphisms[g].src)
            complain("composite entry " + morph_ref(c, g) + " . " + morph_ref(c, f) + " is not composable");
        else if (c.morphisms[h].src != c.morphisms[f].src || c.morphisms[h].tgt != c.morphisms[g].tgt)
            complain("composite " + morph_ref(c, g) + " . " + morph_ref(c, f) + " = " + morph_ref(c, h) + " has wrong endpoints");
    }
    if (!report.ok()) {
        std::sort(report.violations.begin(), report.violations.end());
        return report;
    }

    // Totality on composable non-identity pairs.
    std::vector<std::vector<std::uint32_t>> by_src(c.objects.size());
    for (std::uint32_t m = 0; m < c.morphisms.size(); ++m)
        if (!c.is_identity(m))
            by_src[c.morphisms[m].src].push_back(m);
    for (std::uint32_t f = 0; f < c.morphisms.size(); ++f) {
        if (c.is_identity(f))
            continue;
        for (std::uint32_t g : by_src[c.morphisms[f].tgt])
            if (c.compose(g, f) == npos32)
                complain("missing composite " + morph_ref(c, g) + " . " + morph_ref(c, f));
    }
    if (!report.ok())
        return report;

    for (std::uint32_t f = 0; f < c.morphisms.size(); ++f) {
        for (std::uint32_t g : by_src[c.morphisms[f].tgt]) {
            std::uint32_t gf = c.compose(g, f);
            for (std::uint32_t h : by_src[c.morphisms[g].tgt]) {
                std::uint32_t hg = c.compose(h, g);
                if (c.compose(hg, f) != c.compose(h, gf))
                    complain("associativity fails on " + morph_ref(c, h) + " . " + morph_ref(c, g) + " . " + morph_ref(c, f));
            }
        }
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

ValidationReport validate_functor(const CatFunctor& f) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };
    const FinCategory& s = *f.source;
    const FinCategory& t = *f.target;

    if (f.object_map.size() != s.objects.size() || f.morphism_map.size() != s.morphisms.size()) {
        complain("functor tables do not cover the source category");
        return report;
    }
    for (std::uint32_t x = 0; x < s.objects.size(); ++x)
        if (f.object_map[x] >= t.objects.size())
            complain("object " + s.objects[x] + " maps out of range");
    for (std::uint32_t m = 0; m < s.morphisms.size(); ++m)
        if (f.morphism_map[m] >= t.morphisms.size())
            complain("morphism " + morph_ref(s, m) + " maps out of range");
    if (!report.ok())
        return report;

    for (std::uint32_t m = 0; m < s.morphisms.size(); ++m) {
        std::uint32_t fm = f.morphism_map[m];
        if (t.morphisms[fm].src != f.object_map[s.morphisms[m].src] ||
            t.morphisms[fm].tgt != f.object_map[s.morphisms[m].tgt])
            complain("morphism " + morph_ref(s, m) + " does not map between the images of its endpoints");
    }
    for (std::uint32_t x = 0; x < s.objects.size(); ++x)
        if (f.morphism_map[s.identities[x]] != t.identities[f.object_map[x]])
            complain("identity of " + s.objects[x] + " does not map to an identity");
    for (std::uint32_t m2 = 0; m2 < s.morphisms.size(); ++m2)
        for (std::uint32_t m1 = 0; m1 < s.morphisms.size(); ++m1) {
            std::uint32_t gf = s.compose(m2, m1);
            if (gf == npos32)
                continue;
            if (t.compose(f.morphism_map[m2], f.morphism_map[m1]) != f.morphism_map[gf])
                complain("composition not preserved on " + morph_ref(s, m2) + " . " + morph_ref(s, m1));
        }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

bool equal_categories(const FinCategory& a, const FinCategory& b) {
    if (a.objects != b.objects || a.identities != b.identities)
        return false;
    if (a.morphisms.size() != b.morphisms.size())
        return false;
    for (std::size_t i = 0; i < a.morphisms.size(); ++i)
        if (a.morphisms[i].name != b.morphisms[i].name ||
            a.morphisms[i].src != b.morphisms[i].src ||
            a.morphisms[i].tgt != b.morphisms[i].tgt)
            return false;
    return a.composites == b.composites;
}

bool same_category(const FinCategoryPtr& a, const FinCategoryPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return equal_categories(*a, *b);
}

FinCategory opposite(const FinCategory& c) {
    FinCategory op;
    op.objects = c.objects;
    op.identities = c.identities;
    op.morphisms.reserve(c.morphisms.size());
    for (const auto& m : c.morphisms)
        op.morphisms.push_back({m.name, m.tgt, m.src});
    for (const auto& [key, h] : c.composites) {
        std::uint32_t g = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t f = static_cast<std::uint32_t>(key & 0xffffffffu);
        op.composites.emplace(FinCategory::pair_key(f, g), h);
    }
    return op;
}

namespace {

using Word = std::vector<std::uint32_t>;

struct WordCtx {
    const Presentation* p;
    std::size_t cap;
    // Rewriting explores words a little longer than the start; without a
    // bound, identity-insertion relations blow the search up.
    std::size_t slack = 0;

    std::uint32_t src(const Word& w, std::uint32_t at) const {
        return w.empty() ? at : p->generators[w.back()].src;
    }
    std::uint32_t tgt(const Word& w, std::uint32_t at) const {
        return w.empty() ? at : p->generators[w.front()].tgt;
    }
};

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

// All single-step rewrites of w: replace any occurrence of one relation side
// by the other.  Empty relation sides insert at matching object boundaries.
void rewrite_neighbours(const WordCtx& ctx, const Word& w, std::uint32_t at,
                        std::size_t len_cap, std::vector<Word>& out) {
    for (const auto& [lhs, rhs] : ctx.p->relations) {
        for (int dir = 0; dir < 2; ++dir) {
            const Word& from = dir == 0 ? lhs.factors : rhs.factors;
            const Word& to = dir == 0 ? rhs.factors : lhs.factors;
            std::uint32_t boundary = dir == 0 ? lhs.at : rhs.at;
            if (from.empty()) {
                if (w.size() + to.size() > len_cap)
                    continue;
                // Insertion points whose ambient object matches the identity's object.
                for (std::size_t i = 0; i <= w.size(); ++i) {
                    std::uint32_t obj;
                    if (i < w.size())
                        obj = ctx.p->generators[w[i]].tgt;
                    else if (!w.empty())
                        obj = ctx.p->generators[w.back()].src;
                    else
                        obj = at;
                    if (obj != boundary)
                        continue;
                    Word next(w.begin(), w.begin() + i);
                    next.insert(next.end(), to.begin(), to.end());
                    next.insert(next.end(), w.begin() + i, w.end());
                    out.push_back(std::move(next));
                }
            } else if (w.size() >= from.size()) {
                for (std::size_t i = 0; i + from.size() <= w.size(); ++i) {
                    if (!std::equal(from.begin(), from.end(), w.begin() + i))
                        continue;
                    Word next(w.begin(), w.begin() + i);
                    next.insert(next.end(), to.begin(), to.end());
                    next.insert(next.end(), w.begin() + i + from.size(), w.end());
                    if (next.size() > len_cap)
                        continue;
                    out.push_back(std::move(next));
                }
            }
        }
    }
}

Word normalize(const WordCtx& ctx, Word start, std::uint32_t at) {
    if (start.size() > ctx.cap)
        throw CapExceeded("word exceeds the length cap before rewriting");
    std::size_t len_cap = std::min(ctx.cap, start.size() + ctx.slack);
    std::set<Word> seen;
    std::queue<Word> todo;
    seen.insert(start);
    todo.push(start);
    Word best = start;
    constexpr std::size_t visit_cap = 200000;
    std::vector<Word> next;
    while (!todo.empty()) {
        Word w = std::move(todo.front());
        todo.pop();
        next.clear();
        rewrite_neighbours(ctx, w, at, len_cap, next);
        for (auto& n : next) {
            if (seen.count(n))
                continue;
            if (seen.size() >= visit_cap)
                throw CapExceeded("rewriting explored too many words; raise the cap or simplify the relations");
            if (word_less(n, best))
                best = n;
            todo.push(n);
            seen.insert(std::move(n));
        }
    }
    return best;
}

std::string word_name(const Presentation& p, const Word& w, std::uint32_t at) {
    if (w.empty())
        return "id_" + p.objects[at];
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += ".";
        out += p.generators[w[i]].name;
    }
    return out;
}

}

FinCategory close_presentation(const Presentation& p, std::size_t cap) {
    if (cap < p.generators.size())
        throw CapExceeded("cap is smaller than the number of generator arrows");
    for (const auto& g : p.generators)
        if (g.src >= p.objects.size() || g.tgt >= p.objects.size())
            throw Error("generator " + g.name + " has an out-of-range endpoint");
    for (const auto& [lhs, rhs] : p.relations) {
        WordCtx ctx{&p, cap};
        if (ctx.src(lhs.factors, lhs.at) != ctx.src(rhs.factors, rhs.at) ||
            ctx.tgt(lhs.factors, lhs.at) != ctx.tgt(rhs.factors, rhs.at))
            throw Error("relation sides are not parallel");
        for (std::size_t i = 0; i + 1 < lhs.factors.size(); ++i)
            if (p.generators[lhs.factors[i]].src != p.generators[lhs.factors[i + 1]].tgt)
                throw Error("relation word is not composable");
        for (std::size_t i = 0; i + 1 < rhs.factors.size(); ++i)
            if (p.generators[rhs.factors[i]].src != p.generators[rhs.factors[i + 1]].tgt)
                throw Error("relation word is not composable");
    }

    std::size_t slack = 2;
    for (const auto& [lhs, rhs] : p.relations)
        slack = std::max({slack, lhs.factors.size(), rhs.factors.size()});
    WordCtx ctx{&p, cap, slack};
    FinCategory c;
    c.objects = p.objects;

    // Empty words at different objects are different identities, so the
    // index key carries the object for them.
    std::map<std::pair<Word, std::uint32_t>, std::uint32_t> index_of;
    std::vector<Word> words;
    std::vector<std::uint32_t> word_at;  // meaningful for empty words

    auto add_morphism = [&](const Word& w, std::uint32_t at) -> std::uint32_t {
        auto it = index_of.find({w, w.empty() ? at : npos32});
        if (it != index_of.end())
            return it->second;
        if (words.size() >= cap)
            throw CapExceeded("presentation closes to more than cap morphisms");
        std::uint32_t idx = static_cast<std::uint32_t>(words.size());
        index_of.emplace(std::make_pair(w, w.empty() ? at : npos32), idx);
        words.push_back(w);
        word_at.push_back(at);
        c.morphisms.push_back({word_name(p, w, at), ctx.src(w, at), ctx.tgt(w, at)});
        return idx;
    };

    c.identities.resize(p.objects.size());
    for (std::uint32_t x = 0; x < p.objects.size(); ++x)
        c.identities[x] = add_morphism({}, x);
    for (std::uint32_t g = 0; g < p.generators.size(); ++g) {
        Word w = normalize(ctx, {g}, p.generators[g].src);
        add_morphism(w, p.generators[g].src);
    }

    // Saturate pairwise products.  `words` grows as products land on new
    // canonical forms; pairing each index with every earlier one covers all
    // pairs even so.
    auto try_product = [&](std::uint32_t g, std::uint32_t f) {
        if (ctx.tgt(words[f], word_at[f]) != ctx.src(words[g], word_at[g]))
            return;
        Word prod = words[g];
        prod.insert(prod.end(), words[f].begin(), words[f].end());
        if (prod.size() > cap)
            throw CapExceeded("composite word exceeds the length cap");
        // If the product rewrites to an identity, its object is the source
        // of f (= target of the whole composite's source end).
        std::uint32_t at = ctx.src(words[f], word_at[f]);
        Word canon = normalize(ctx, std::move(prod), at);
        std::uint32_t h = add_morphism(canon, at);
        if (!c.is_identity(g) && !c.is_identity(f))
            c.composites.emplace(FinCategory::pair_key(g, f), h);
    };
    for (std::uint32_t a = 0; a < words.size(); ++a)
        for (std::uint32_t b = 0; b <= a; ++b) {
            try_product(a, b);
            if (a != b)
                try_product(b, a);
        }
    return c;
}

FinCategoryPtr digraph_category() {
    // Shared instance so copresheaves over it compare bases by pointer.
    static const FinCategoryPtr cached = [] {
        Presentation p;
        p.objects = {"V", "E"};
        p.generators = {{"s", 1, 0}, {"t", 1, 0}};
        return std::make_shared<FinCategory>(close_presentation(p, 16));
    }();
    return cached;
}

FinCategoryPtr symmetric_graph_category() {
    static const FinCategoryPtr cached = [] {
        Presentation p;
        p.objects = {"V", "E"};
        p.generators = {{"s", 1, 0}, {"t", 1, 0}, {"r", 1, 1}};
        // r.r = id_E, s.r = t, t.r = s
        p.relations.push_back({PresentationWord{{2, 2}, 1}, PresentationWord{{}, 1}});
        p.relations.push_back({PresentationWord{{0, 2}, 1}, PresentationWord{{1}, 1}});
        p.relations.push_back({PresentationWord{{1, 2}, 1}, PresentationWord{{0}, 1}});
        return std::make_shared<FinCategory>(close_presentation(p, 64));
    }();
    return cached;
}

}
