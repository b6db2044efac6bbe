#include "cspcat/textio.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cspcat {

namespace {

struct Line {
    std::size_t number;
    std::string text;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<Line> logical_lines(const std::string& text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++number;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        std::string line = trim(raw);
        if (!line.empty())
            out.push_back({number, std::move(line)});
    }
    return out;
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

// Splits at `sep` only outside (), [] and {} so element names may nest them.
std::vector<std::string> split_depth(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[' || ch == '{')
            ++depth;
        if (ch == ')' || ch == ']' || ch == '}')
            --depth;
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> delimited_list(const std::string& s, char open, char close,
                                        std::size_t line) {
    std::string body = trim(s);
    if (body.size() < 2 || body.front() != open || body.back() != close)
        fail(line, std::string("expected a list delimited by ") + open + close);
    body = trim(body.substr(1, body.size() - 2));
    if (body.empty())
        return {};
    return split_depth(body, ',');
}

bool split_once(const std::string& s, const std::string& mid, std::string& left,
                std::string& right) {
    std::size_t at = s.find(mid);
    if (at == std::string::npos)
        return false;
    left = trim(s.substr(0, at));
    right = trim(s.substr(at + mid.size()));
    return true;
}

std::string first_word(const std::string& s, std::string& rest) {
    std::size_t sp = s.find_first_of(" \t");
    if (sp == std::string::npos) {
        rest = "";
        return s;
    }
    rest = trim(s.substr(sp));
    return s.substr(0, sp);
}

std::uint32_t parse_uint(const std::string& s, std::size_t line) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        fail(line, "expected a number, got '" + s + "'");
    return static_cast<std::uint32_t>(std::stoul(s));
}

std::uint32_t index_in(const NamedSet& set, const std::string& name, std::size_t line,
                       const std::string& what) {
    for (std::uint32_t i = 0; i < set.size(); ++i)
        if (set[i] == name)
            return i;
    fail(line, "unknown " + what + " '" + name + "'");
}

// name/arity pairs shared by signatures and condition symbols
std::pair<std::string, std::uint32_t> parse_slashed(const std::string& s, std::size_t line) {
    std::string name, arity;
    if (!split_once(s, "/", name, arity) || name.empty())
        fail(line, "expected name/arity, got '" + s + "'");
    return {name, parse_uint(arity, line)};
}

void throw_violations(const ValidationReport& rep, const std::string& what) {
    if (rep.ok())
        return;
    std::string msg = what + ":";
    for (const auto& v : rep.violations)
        msg += " " + v + ";";
    msg.pop_back();
    throw ParseError(msg);
}

}  // namespace

FinCategoryPtr parse_category(const std::string& text, std::size_t cap) {
    std::vector<std::string> objects;
    struct RawArrow {
        std::string name, src, tgt;
        std::size_t line;
    };
    struct RawCompose {
        std::string g, f, h;
        std::size_t line;
    };
    struct RawRelation {
        std::string left, right;
        std::size_t line;
    };
    std::vector<RawArrow> arrows;
    std::vector<RawCompose> composes;
    std::vector<RawRelation> relations;

    for (const Line& ln : logical_lines(text)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "object") {
            if (rest.empty() || tokens(rest).size() != 1)
                fail(ln.number, "object takes one name");
            objects.push_back(rest);
        } else if (head == "arrow") {
            std::string name, sides, src, tgt;
            if (!split_once(rest, " : ", name, sides) || !split_once(sides, "->", src, tgt))
                fail(ln.number, "expected 'arrow name : src -> tgt'");
            arrows.push_back({name, src, tgt, ln.number});
        } else if (head == "compose") {
            std::string gf, g, f, h;
            if (!split_once(rest, " = ", gf, h) || !split_once(gf, " . ", g, f))
                fail(ln.number, "expected 'compose g . f = h'");
            composes.push_back({g, f, h, ln.number});
        } else if (head == "relation") {
            std::string left, right;
            if (!split_once(rest, " = ", left, right))
                fail(ln.number, "expected 'relation word = word'");
            relations.push_back({left, right, ln.number});
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }

    auto object_index = [&](const std::string& name, std::size_t line) {
        for (std::uint32_t i = 0; i < objects.size(); ++i)
            if (objects[i] == name)
                return i;
        fail(line, "unknown object '" + name + "'");
    };

    if (!relations.empty()) {
        if (!composes.empty())
            fail(composes.front().line, "a presentation uses relation lines, not compose lines");
        Presentation p;
        p.objects = objects;
        for (const auto& a : arrows)
            p.generators.push_back({a.name, object_index(a.src, a.line), object_index(a.tgt, a.line)});
        auto parse_word = [&](const std::string& word, std::size_t line) {
            PresentationWord w;
            w.at = npos32;
            if (word.rfind("id_", 0) == 0) {
                w.at = object_index(word.substr(3), line);
                return w;
            }
            for (const auto& factor : split_depth(word, '.')) {
                std::uint32_t g = npos32;
                for (std::uint32_t i = 0; i < p.generators.size(); ++i)
                    if (p.generators[i].name == factor)
                        g = i;
                if (g == npos32)
                    fail(line, "unknown generator '" + factor + "'");
                w.factors.push_back(g);
            }
            w.at = p.generators[w.factors.front()].tgt;
            return w;
        };
        for (const auto& r : relations)
            p.relations.push_back({parse_word(r.left, r.line), parse_word(r.right, r.line)});
        return std::make_shared<FinCategory>(close_presentation(p, cap));
    }

    FinCategory c;
    c.objects = objects;
    for (std::uint32_t i = 0; i < objects.size(); ++i) {
        c.identities.push_back(static_cast<std::uint32_t>(c.morphisms.size()));
        c.morphisms.push_back({"id_" + objects[i], i, i});
    }
    for (const auto& a : arrows)
        c.morphisms.push_back({a.name, object_index(a.src, a.line), object_index(a.tgt, a.line)});
    std::unordered_set<std::string> names;
    for (const auto& m : c.morphisms)
        if (!names.insert(m.name).second)
            throw ParseError("duplicate morphism name '" + m.name + "'");
    auto morphism_index = [&](const std::string& name, std::size_t line) {
        std::uint32_t m = c.morphism_index(name);
        if (m == npos32)
            fail(line, "unknown morphism '" + name + "'");
        return m;
    };
    for (const auto& e : composes) {
        std::uint32_t g = morphism_index(e.g, e.line);
        std::uint32_t f = morphism_index(e.f, e.line);
        std::uint32_t h = morphism_index(e.h, e.line);
        if (c.morphisms[f].tgt != c.morphisms[g].src)
            fail(e.line, "'" + e.g + " . " + e.f + "' is not composable");
        if (c.is_identity(f) || c.is_identity(g)) {
            if (c.compose(g, f) != h)
                fail(e.line, "identity composite must equal the other factor");
            continue;
        }
        auto key = FinCategory::pair_key(g, f);
        if (c.composites.count(key))
            fail(e.line, "duplicate compose line for '" + e.g + " . " + e.f + "'");
        c.composites.emplace(key, h);
    }
    throw_violations(validate_category(c), "category invalid");
    return std::make_shared<FinCategory>(std::move(c));
}

std::string serialize_category(const FinCategory& c) {
    std::string out;
    for (const auto& o : c.objects)
        out += "object " + o + "\n";
    for (std::uint32_t m = 0; m < c.morphism_count(); ++m)
        if (!c.is_identity(m))
            out += "arrow " + c.morphisms[m].name + " : " + c.objects[c.morphisms[m].src] +
                   " -> " + c.objects[c.morphisms[m].tgt] + "\n";
    std::vector<std::string> lines;
    for (const auto& [key, h] : c.composites) {
        std::uint32_t g = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t f = static_cast<std::uint32_t>(key & 0xffffffffu);
        lines.push_back("compose " + c.morphisms[g].name + " . " + c.morphisms[f].name + " = " +
                        c.morphisms[h].name + "\n");
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines)
        out += l;
    return out;
}

CategoryResolver builtin_resolver() {
    return [](const std::string& ref) -> FinCategoryPtr {
        if (ref == "digraph")
            return digraph_category();
        if (ref == "symmetric")
            return symmetric_graph_category();
        throw ParseError("unknown base reference '" + ref + "'");
    };
}

Copresheaf parse_copresheaf(const std::string& text, const CategoryResolver& resolve) {
    auto lines = logical_lines(text);
    Copresheaf x;
    for (const Line& ln : lines) {
        std::string rest;
        if (first_word(ln.text, rest) != "base")
            continue;
        if (x.shape)
            fail(ln.number, "more than one base line");
        x.shape = resolve(rest);
    }
    if (!x.shape)
        throw ParseError("missing base line");
    const FinCategory& c = *x.shape;
    x.sets.assign(c.object_count(), nullptr);
    x.maps.resize(c.morphism_count());

    for (const Line& ln : lines) {
        std::string rest;
        if (first_word(ln.text, rest) != "set")
            continue;
        std::string obj, list;
        if (!split_once(rest, " = ", obj, list))
            fail(ln.number, "expected 'set obj = {e1, e2}'");
        std::uint32_t o = c.object_index(obj);
        if (o == npos32)
            fail(ln.number, "unknown object '" + obj + "'");
        if (x.sets[o])
            fail(ln.number, "set for '" + obj + "' given twice");
        NamedSet elems;
        std::unordered_set<std::string> seen;
        for (auto& e : delimited_list(list, '{', '}', ln.number)) {
            if (!seen.insert(e).second)
                fail(ln.number, "duplicate element '" + e + "'");
            elems.push_back(std::move(e));
        }
        x.sets[o] = make_set(std::move(elems));
    }
    for (std::uint32_t o = 0; o < c.object_count(); ++o)
        if (!x.sets[o])
            x.sets[o] = make_set({});

    for (std::uint32_t m = 0; m < c.morphism_count(); ++m)
        x.maps[m].assign(x.sets[c.morphisms[m].src]->size(),
                         c.is_identity(m) ? 0 : npos32);
    for (std::uint32_t o = 0; o < c.object_count(); ++o)
        std::iota(x.maps[c.identities[o]].begin(), x.maps[c.identities[o]].end(), 0);

    for (const Line& ln : lines) {
        std::string rest;
        if (first_word(ln.text, rest) != "map")
            continue;
        std::string name, sides, from, to;
        if (!split_once(rest, " : ", name, sides) || !split_once(sides, "->", from, to))
            fail(ln.number, "expected 'map f : e -> e''");
        std::uint32_t m = c.morphism_index(name);
        if (m == npos32)
            fail(ln.number, "unknown morphism '" + name + "'");
        if (c.is_identity(m))
            fail(ln.number, "identity maps are implicit");
        std::uint32_t a = index_in(*x.sets[c.morphisms[m].src], from, ln.number, "element");
        std::uint32_t b = index_in(*x.sets[c.morphisms[m].tgt], to, ln.number, "element");
        if (x.maps[m][a] != npos32)
            fail(ln.number, "element '" + from + "' mapped twice under '" + name + "'");
        x.maps[m][a] = b;
    }
    for (std::uint32_t m = 0; m < c.morphism_count(); ++m)
        for (std::uint32_t a = 0; a < x.maps[m].size(); ++a)
            if (x.maps[m][a] == npos32)
                throw ParseError("map for '" + c.morphisms[m].name + "' misses element '" +
                                 (*x.sets[c.morphisms[m].src])[a] + "'");
    throw_violations(validate_diagram(x), "copresheaf invalid");
    return x;
}

std::string serialize_copresheaf(const Copresheaf& x, const std::string& base_ref) {
    const FinCategory& c = *x.shape;
    std::string out = "base " + base_ref + "\n";
    for (std::uint32_t o = 0; o < c.object_count(); ++o) {
        out += "set " + c.objects[o] + " = {";
        for (std::uint32_t e = 0; e < x.sets[o]->size(); ++e)
            out += (e ? ", " : "") + (*x.sets[o])[e];
        out += "}\n";
    }
    for (std::uint32_t m = 0; m < c.morphism_count(); ++m) {
        if (c.is_identity(m))
            continue;
        const auto& src = *x.sets[c.morphisms[m].src];
        const auto& tgt = *x.sets[c.morphisms[m].tgt];
        for (std::uint32_t a = 0; a < x.maps[m].size(); ++a)
            out += "map " + c.morphisms[m].name + " : " + src[a] + " -> " + tgt[x.maps[m][a]] +
                   "\n";
    }
    return out;
}

CatFunctor parse_functor(const std::string& text, const CategoryResolver& resolve) {
    auto lines = logical_lines(text);
    CatFunctor d;
    for (const Line& ln : lines) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "source") {
            if (d.source)
                fail(ln.number, "more than one source line");
            d.source = resolve(rest);
        } else if (head == "target") {
            if (d.target)
                fail(ln.number, "more than one target line");
            d.target = resolve(rest);
        }
    }
    if (!d.source || !d.target)
        throw ParseError("functor needs source and target lines");
    const FinCategory& j = *d.source;
    const FinCategory& s = *d.target;
    d.object_map.assign(j.object_count(), npos32);
    d.morphism_map.assign(j.morphism_count(), npos32);

    for (const Line& ln : lines) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "source" || head == "target")
            continue;
        std::string from, to;
        if (!split_once(rest, "->", from, to))
            fail(ln.number, "expected '" + head + " x -> y'");
        if (head == "object") {
            std::uint32_t a = j.object_index(from);
            if (a == npos32)
                fail(ln.number, "unknown source object '" + from + "'");
            std::uint32_t b = s.object_index(to);
            if (b == npos32)
                fail(ln.number, "unknown target object '" + to + "'");
            if (d.object_map[a] != npos32)
                fail(ln.number, "object '" + from + "' mapped twice");
            d.object_map[a] = b;
        } else if (head == "arrow") {
            std::uint32_t a = j.morphism_index(from);
            if (a == npos32)
                fail(ln.number, "unknown source morphism '" + from + "'");
            std::uint32_t b = s.morphism_index(to);
            if (b == npos32)
                fail(ln.number, "unknown target morphism '" + to + "'");
            if (d.morphism_map[a] != npos32)
                fail(ln.number, "arrow '" + from + "' mapped twice");
            d.morphism_map[a] = b;
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    for (std::uint32_t o = 0; o < j.object_count(); ++o)
        if (d.object_map[o] == npos32)
            throw ParseError("object '" + j.objects[o] + "' is not mapped");
    for (std::uint32_t m = 0; m < j.morphism_count(); ++m)
        if (d.morphism_map[m] == npos32) {
            if (!j.is_identity(m))
                throw ParseError("arrow '" + j.morphisms[m].name + "' is not mapped");
            d.morphism_map[m] = s.identities[d.object_map[j.morphisms[m].src]];
        }
    throw_violations(validate_functor(d), "functor invalid");
    return d;
}

std::string serialize_functor(const CatFunctor& d, const std::string& source_ref,
                              const std::string& target_ref) {
    std::string out = "source " + source_ref + "\ntarget " + target_ref + "\n";
    for (std::uint32_t o = 0; o < d.source->object_count(); ++o)
        out += "object " + d.source->objects[o] + " -> " + d.target->objects[d.object_map[o]] +
               "\n";
    for (std::uint32_t m = 0; m < d.source->morphism_count(); ++m)
        if (!d.source->is_identity(m))
            out += "arrow " + d.source->morphisms[m].name + " -> " +
                   d.target->morphisms[d.morphism_map[m]].name + "\n";
    return out;
}

namespace {

// "f(x,y,z)" -> name f and raw argument names
std::pair<std::string, std::vector<std::string>> parse_applied(const std::string& s,
                                                               std::size_t line) {
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        fail(line, "expected name(args), got '" + s + "'");
    std::string name = trim(s.substr(0, open));
    std::string args = trim(s.substr(open + 1, s.size() - open - 2));
    if (name.empty())
        fail(line, "missing symbol name in '" + s + "'");
    if (args.empty())
        return {name, {}};
    return {name, split_depth(args, ',')};
}

}

MinorCondition parse_condition(const std::string& text) {
    MinorCondition c;
    for (const Line& ln : logical_lines(text)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "symbol") {
            auto [name, arity] = parse_slashed(rest, ln.number);
            c.symbols.push_back(name);
            c.arities.push_back(arity);
        } else if (head == "identity") {
            std::string lhs, rhs;
            if (!split_once(rest, " = ", lhs, rhs))
                fail(ln.number, "expected 'identity f(...) = g(...)'");
            auto [lname, largs] = parse_applied(lhs, ln.number);
            auto [rname, rargs] = parse_applied(rhs, ln.number);
            MinorIdentity id;
            NamedSet symbols(c.symbols.begin(), c.symbols.end());
            id.left = index_in(symbols, lname, ln.number, "symbol");
            id.right = index_in(symbols, rname, ln.number, "symbol");
            if (largs.size() != c.arities[id.left])
                fail(ln.number, "'" + lname + "' takes " + std::to_string(c.arities[id.left]) +
                                    " arguments");
            if (rargs.size() != c.arities[id.right])
                fail(ln.number, "'" + rname + "' takes " + std::to_string(c.arities[id.right]) +
                                    " arguments");
            std::unordered_set<std::string> distinct(rargs.begin(), rargs.end());
            if (distinct.size() != rargs.size())
                fail(ln.number, "right side variables must be distinct");
            for (const auto& v : largs)
                id.pi.push_back(index_in(rargs, v, ln.number, "variable"));
            c.identities.push_back(std::move(id));
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    throw_violations(validate_condition(c), "condition invalid");
    return c;
}

std::string serialize_condition(const MinorCondition& c) {
    std::string out;
    for (std::size_t f = 0; f < c.symbols.size(); ++f)
        out += "symbol " + c.symbols[f] + "/" + std::to_string(c.arities[f]) + "\n";
    for (const auto& id : c.identities) {
        out += "identity " + c.symbols[id.left] + "(";
        for (std::size_t t = 0; t < id.pi.size(); ++t)
            out += (t ? "," : "") + ("x" + std::to_string(id.pi[t] + 1));
        out += ") = " + c.symbols[id.right] + "(";
        for (std::uint32_t v = 0; v < c.arities[id.right]; ++v)
            out += (v ? "," : "") + ("x" + std::to_string(v + 1));
        out += ")\n";
    }
    return out;
}

RelationalStructure parse_structure(const std::string& text) {
    RelationalStructure a;
    bool have_domain = false;
    for (const Line& ln : logical_lines(text)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "domain") {
            if (have_domain)
                fail(ln.number, "more than one domain line");
            have_domain = true;
            std::unordered_set<std::string> seen;
            for (auto& e : delimited_list(rest, '{', '}', ln.number)) {
                if (!seen.insert(e).second)
                    fail(ln.number, "duplicate domain element '" + e + "'");
                a.domain.push_back(std::move(e));
            }
        } else if (head == "rel") {
            std::string decl, list;
            if (!split_once(rest, " = ", decl, list))
                fail(ln.number, "expected 'rel R/k = {(a,b), ...}'");
            auto [name, arity] = parse_slashed(decl, ln.number);
            if (!have_domain)
                fail(ln.number, "domain line must come before rel lines");
            a.signature.names.push_back(name);
            a.signature.arities.push_back(arity);
            std::vector<std::vector<std::uint32_t>> rel;
            for (const auto& item : delimited_list(list, '{', '}', ln.number)) {
                auto parts = delimited_list(item, '(', ')', ln.number);
                if (parts.size() != arity)
                    fail(ln.number, "tuple '" + item + "' does not have arity " +
                                        std::to_string(arity));
                std::vector<std::uint32_t> t;
                for (const auto& e : parts)
                    t.push_back(index_in(a.domain, e, ln.number, "domain element"));
                rel.push_back(std::move(t));
            }
            std::sort(rel.begin(), rel.end());
            rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
            a.relations.push_back(std::move(rel));
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    if (!have_domain)
        throw ParseError("missing domain line");
    throw_violations(validate_structure(a), "structure invalid");
    return a;
}

std::string serialize_structure(const RelationalStructure& a) {
    std::string out = "domain {";
    for (std::size_t e = 0; e < a.domain.size(); ++e)
        out += (e ? ", " : "") + a.domain[e];
    out += "}\n";
    for (std::size_t j = 0; j < a.signature.names.size(); ++j) {
        out += "rel " + a.signature.names[j] + "/" + std::to_string(a.signature.arities[j]) +
               " = {";
        for (std::size_t t = 0; t < a.relations[j].size(); ++t) {
            out += t ? ", (" : "(";
            for (std::size_t i = 0; i < a.relations[j][t].size(); ++i)
                out += (i ? "," : "") + a.domain[a.relations[j][t][i]];
            out += ")";
        }
        out += "}\n";
    }
    return out;
}

namespace {

struct RawAtom {
    enum Kind { relation, equality, functional } kind;
    std::string name;
    std::vector<std::string> args;
    std::size_t line;
};

struct RawBody {
    std::vector<std::string> bound;
    std::vector<RawAtom> atoms;
};

RawBody parse_body(const std::string& body, std::size_t line) {
    RawBody out;
    std::string rest = trim(body);
    if (rest.rfind("exists ", 0) == 0) {
        std::string vars, after;
        if (!split_once(rest.substr(7), " . ", vars, after))
            fail(line, "exists needs a '.' between its variables and the body");
        out.bound = tokens(vars);
        if (out.bound.empty())
            fail(line, "exists lists at least one variable");
        rest = after;
    }
    for (const auto& part : split_depth(rest, '&')) {
        if (part.empty())
            fail(line, "empty conjunct");
        std::size_t open = part.find('(');
        std::size_t eq = part.find('=');
        RawAtom atom;
        atom.line = line;
        if (open != std::string::npos && (eq == std::string::npos || open < eq)) {
            std::size_t close = part.rfind(')');
            if (close == std::string::npos)
                fail(line, "unbalanced parentheses in '" + part + "'");
            std::string applied = trim(part.substr(0, close + 1));
            std::string tail = trim(part.substr(close + 1));
            auto [name, args] = parse_applied(applied, line);
            atom.name = name;
            atom.args = args;
            if (tail.empty()) {
                atom.kind = RawAtom::relation;
            } else {
                if (tail.rfind("=", 0) != 0)
                    fail(line, "unexpected text after '" + applied + "'");
                if (atom.args.size() != 1)
                    fail(line, "functional atoms take one argument: f(x) = y");
                atom.kind = RawAtom::functional;
                atom.args.push_back(trim(tail.substr(1)));
            }
        } else {
            std::string l, r;
            if (!split_once(part, "=", l, r) || l.empty() || r.empty())
                fail(line, "cannot parse atom '" + part + "'");
            atom.kind = RawAtom::equality;
            atom.args = {l, r};
        }
        out.atoms.push_back(std::move(atom));
    }
    return out;
}

// Resolves variable names to indices, free variables first.  With
// `fixed_free` the free list is exact; otherwise unquantified names extend
// it in order of first occurrence.
PPFormula resolve_formula(const RawBody& body, std::vector<std::string> free_vars,
                          bool fixed_free,
                          const std::function<std::uint32_t(const RawAtom&)>& symbol_of) {
    PPFormula out;
    out.free_vars = std::move(free_vars);
    out.bound_vars = body.bound;
    std::unordered_map<std::string, std::uint32_t> where;
    auto declare = [&](const std::string& v, std::uint32_t at) {
        if (where.count(v))
            fail(0, "variable '" + v + "' declared twice");
        where[v] = at;
    };
    for (std::uint32_t i = 0; i < out.free_vars.size(); ++i)
        declare(out.free_vars[i], i);
    for (std::uint32_t i = 0; i < out.bound_vars.size(); ++i)
        declare(out.bound_vars[i], npos32 - i);  // placed after free vars settle

    auto var_index = [&](const std::string& v, std::size_t line) -> std::uint32_t {
        auto it = where.find(v);
        if (it != where.end())
            return it->second;
        if (fixed_free)
            fail(line, "unknown variable '" + v + "'");
        std::uint32_t at = static_cast<std::uint32_t>(out.free_vars.size());
        out.free_vars.push_back(v);
        where[v] = at;
        return at;
    };
    for (const auto& atom : body.atoms) {
        PPAtom a;
        a.kind = atom.kind == RawAtom::relation    ? PPAtom::relation
                 : atom.kind == RawAtom::equality ? PPAtom::equality
                                                   : PPAtom::functional;
        if (a.kind != PPAtom::equality)
            a.symbol = symbol_of(atom);
        for (const auto& v : atom.args)
            a.args.push_back(var_index(v, atom.line));
        out.atoms.push_back(std::move(a));
    }
    // Bound variables sit after the final free list.
    std::uint32_t n_free = static_cast<std::uint32_t>(out.free_vars.size());
    for (auto& a : out.atoms)
        for (auto& v : a.args)
            if (v > npos32 - static_cast<std::uint32_t>(out.bound_vars.size()))
                v = n_free + (npos32 - v);
    return out;
}

std::string variable_name(const PPFormula& f, std::uint32_t v) {
    return v < f.free_vars.size() ? f.free_vars[v] : f.bound_vars[v - f.free_vars.size()];
}

std::string body_text(const PPFormula& f,
                      const std::function<std::string(const PPAtom&)>& symbol_name) {
    std::string out;
    if (!f.bound_vars.empty()) {
        out += "exists";
        for (const auto& v : f.bound_vars)
            out += " " + v;
        out += " . ";
    }
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
        const PPAtom& a = f.atoms[i];
        if (i)
            out += " & ";
        if (a.kind == PPAtom::equality) {
            out += variable_name(f, a.args[0]) + " = " + variable_name(f, a.args[1]);
        } else if (a.kind == PPAtom::functional) {
            out += symbol_name(a) + "(" + variable_name(f, a.args[0]) + ") = " +
                   variable_name(f, a.args[1]);
        } else {
            out += symbol_name(a) + "(";
            for (std::size_t t = 0; t < a.args.size(); ++t)
                out += (t ? "," : "") + variable_name(f, a.args[t]);
            out += ")";
        }
    }
    if (f.atoms.empty())
        fail(0, "a pp formula has at least one atom");
    return out;
}

}

ParsedFormula parse_pp_formula(const std::string& text) {
    ParsedFormula out;
    std::vector<std::string> free_vars;
    bool fixed_free = false;
    std::string body;
    std::size_t body_line = 0;
    for (const Line& ln : logical_lines(text)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "symbol") {
            auto [name, arity] = parse_slashed(rest, ln.number);
            out.signature.names.push_back(name);
            out.signature.arities.push_back(arity);
        } else if (head == "free") {
            fixed_free = true;
            free_vars = tokens(rest);
        } else {
            if (!body.empty())
                fail(ln.number, "the formula body spans one line");
            body = ln.text;
            body_line = ln.number;
        }
    }
    if (body.empty())
        throw ParseError("missing formula body");
    RawBody raw = parse_body(body, body_line);
    NamedSet names(out.signature.names.begin(), out.signature.names.end());
    out.formula = resolve_formula(raw, free_vars, fixed_free, [&](const RawAtom& atom) {
        if (atom.kind == RawAtom::functional)
            fail(atom.line, "functional atoms need a base category; use a relational atom");
        std::uint32_t s = index_in(names, atom.name, atom.line, "symbol");
        if (atom.args.size() != out.signature.arities[s])
            fail(atom.line, "'" + atom.name + "' takes " +
                                std::to_string(out.signature.arities[s]) + " arguments");
        return s;
    });
    return out;
}

std::string serialize_pp_formula(const PPFormula& f, const RelationalSignature& sig) {
    std::string out;
    for (std::size_t j = 0; j < sig.names.size(); ++j)
        out += "symbol " + sig.names[j] + "/" + std::to_string(sig.arities[j]) + "\n";
    if (!f.free_vars.empty()) {
        out += "free";
        for (const auto& v : f.free_vars)
            out += " " + v;
        out += "\n";
    }
    out += body_text(f, [&](const PPAtom& a) { return sig.names[a.symbol]; }) + "\n";
    return out;
}

PPFormula parse_pp_sentence(const std::string& text, const FinCategory& base) {
    std::string body;
    for (const Line& ln : logical_lines(text))
        body += (body.empty() ? "" : " ") + ln.text;
    if (body.empty())
        throw ParseError("missing sentence body");
    RawBody raw = parse_body(body, 1);
    return resolve_formula(raw, {}, true, [&](const RawAtom& atom) {
        if (atom.kind == RawAtom::relation)
            fail(atom.line, "a sentence over a category uses functional atoms f(x) = y");
        std::uint32_t m = base.morphism_index(atom.name);
        if (m == npos32)
            throw UnknownMorphism("unknown morphism '" + atom.name + "'");
        return m;
    });
}

std::string serialize_pp_sentence(const PPFormula& f, const FinCategory& base) {
    return body_text(f, [&](const PPAtom& a) { return base.morphisms[a.symbol].name; }) + "\n";
}

PPInterpretation parse_interpretation(const std::string& text) {
    PPInterpretation out;
    bool have_dimension = false, have_domain = false;
    std::vector<std::pair<std::string, PPFormula>> relations;

    auto source_names = [&]() { return NamedSet(out.source.names.begin(), out.source.names.end()); };
    auto resolve_against_source = [&](const RawBody& raw, std::vector<std::string> vars) {
        NamedSet names = source_names();
        return resolve_formula(raw, std::move(vars), true, [&, names](const RawAtom& atom) {
            if (atom.kind != RawAtom::relation)
                fail(atom.line, "interpretation bodies use relational atoms");
            std::uint32_t s = index_in(names, atom.name, atom.line, "symbol");
            if (atom.args.size() != out.source.arities[s])
                fail(atom.line, "'" + atom.name + "' takes " +
                                    std::to_string(out.source.arities[s]) + " arguments");
            return s;
        });
    };

    for (const Line& ln : logical_lines(text)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "dimension") {
            out.dimension = parse_uint(rest, ln.number);
            have_dimension = true;
        } else if (head == "source") {
            auto [name, arity] = parse_slashed(rest, ln.number);
            out.source.names.push_back(name);
            out.source.arities.push_back(arity);
        } else if (head == "target") {
            auto [name, arity] = parse_slashed(rest, ln.number);
            out.target.names.push_back(name);
            out.target.arities.push_back(arity);
        } else if (head == "domain") {
            if (have_domain)
                fail(ln.number, "more than one domain formula");
            have_domain = true;
            std::string vars, body;
            if (!split_once(rest, " : ", vars, body))
                fail(ln.number, "expected 'domain (vars) : body'");
            auto names = delimited_list(vars, '(', ')', ln.number);
            std::vector<std::string> free(names.begin(), names.end());
            out.domain_formula = resolve_against_source(parse_body(body, ln.number), free);
        } else if (head == "relation") {
            std::string name, decl, vars, body;
            name = first_word(rest, decl);
            if (!split_once(decl, " : ", vars, body))
                fail(ln.number, "expected 'relation R (vars) : body'");
            auto items = delimited_list(vars, '(', ')', ln.number);
            std::vector<std::string> free(items.begin(), items.end());
            relations.emplace_back(name,
                                   resolve_against_source(parse_body(body, ln.number), free));
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    if (!have_dimension)
        throw ParseError("missing dimension line");
    if (!have_domain)
        throw ParseError("missing domain formula");
    out.relation_formulas.resize(out.target.names.size());
    std::vector<bool> given(out.target.names.size(), false);
    NamedSet tnames(out.target.names.begin(), out.target.names.end());
    for (auto& [name, f] : relations) {
        std::uint32_t j = index_in(tnames, name, 0, "target symbol");
        if (given[j])
            throw ParseError("relation '" + name + "' defined twice");
        given[j] = true;
        if (f.free_vars.size() != std::size_t(out.dimension) * out.target.arities[j])
            throw ParseError("relation '" + name + "' needs " +
                             std::to_string(out.dimension * out.target.arities[j]) +
                             " free variables");
        out.relation_formulas[j] = std::move(f);
    }
    for (std::size_t j = 0; j < given.size(); ++j)
        if (!given[j])
            throw ParseError("missing relation formula for '" + out.target.names[j] + "'");
    if (out.domain_formula.free_vars.size() != out.dimension)
        throw ParseError("the domain formula needs dimension-many free variables");
    return out;
}

std::string serialize_interpretation(const PPInterpretation& phi) {
    std::string out = "dimension " + std::to_string(phi.dimension) + "\n";
    for (std::size_t j = 0; j < phi.source.names.size(); ++j)
        out += "source " + phi.source.names[j] + "/" + std::to_string(phi.source.arities[j]) +
               "\n";
    for (std::size_t j = 0; j < phi.target.names.size(); ++j)
        out += "target " + phi.target.names[j] + "/" + std::to_string(phi.target.arities[j]) +
               "\n";
    auto header = [](const PPFormula& f) {
        std::string vars = "(";
        for (std::size_t i = 0; i < f.free_vars.size(); ++i)
            vars += (i ? "," : "") + f.free_vars[i];
        return vars + ")";
    };
    auto symbol_name = [&](const PPAtom& a) { return phi.source.names[a.symbol]; };
    out += "domain " + header(phi.domain_formula) + " : " +
           body_text(phi.domain_formula, symbol_name) + "\n";
    for (std::size_t j = 0; j < phi.target.names.size(); ++j)
        out += "relation " + phi.target.names[j] + " " + header(phi.relation_formulas[j]) +
               " : " + body_text(phi.relation_formulas[j], symbol_name) + "\n";
    return out;
}

GadgetFunctor parse_gadget(const std::string& manifest, const FileLoader& load) {
    std::string shape_ref, base_ref, arrows_ref;
    std::vector<std::pair<std::string, std::string>> gadget_refs;
    for (const Line& ln : logical_lines(manifest)) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "shape") {
            shape_ref = rest;
        } else if (head == "base") {
            base_ref = rest;
        } else if (head == "arrows") {
            arrows_ref = rest;
        } else if (head == "gadget") {
            std::string obj, file;
            if (!split_once(rest, " = ", obj, file))
                fail(ln.number, "expected 'gadget obj = file'");
            gadget_refs.emplace_back(obj, file);
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    if (shape_ref.empty() || base_ref.empty() || arrows_ref.empty())
        throw ParseError("gadget manifest needs shape, base and arrows lines");

    GadgetFunctor g;
    g.shape = parse_category(load(shape_ref));
    g.base = parse_category(load(base_ref));
    CategoryResolver resolve = [&](const std::string& ref) -> FinCategoryPtr {
        if (ref == base_ref)
            return g.base;
        if (ref == shape_ref)
            return g.shape;
        return parse_category(load(ref));
    };
    g.gadgets.resize(g.shape->object_count());
    std::vector<bool> have(g.shape->object_count(), false);
    for (const auto& [obj, file] : gadget_refs) {
        std::uint32_t o = g.shape->object_index(obj);
        if (o == npos32)
            throw ParseError("unknown shape object '" + obj + "'");
        if (have[o])
            throw ParseError("gadget for '" + obj + "' given twice");
        have[o] = true;
        g.gadgets[o] = parse_copresheaf(load(file), resolve);
        if (!same_category(g.gadgets[o].shape, g.base))
            throw ParseError("gadget for '" + obj + "' does not live over the base");
        g.gadgets[o].shape = g.base;
    }
    for (std::uint32_t o = 0; o < have.size(); ++o)
        if (!have[o])
            throw ParseError("missing gadget for '" + g.shape->objects[o] + "'");

    g.arrows.resize(g.shape->morphism_count());
    std::vector<bool> started(g.shape->morphism_count(), false);
    std::uint32_t current = npos32;
    for (const Line& ln : logical_lines(load(arrows_ref))) {
        std::string rest;
        std::string head = first_word(ln.text, rest);
        if (head == "arrow") {
            current = g.shape->morphism_index(rest);
            if (current == npos32)
                fail(ln.number, "unknown shape morphism '" + rest + "'");
            if (started[current])
                fail(ln.number, "arrow '" + rest + "' given twice");
            started[current] = true;
            auto& comp = g.arrows[current].components;
            comp.resize(g.base->object_count());
            for (std::uint32_t o = 0; o < g.base->object_count(); ++o)
                comp[o].assign(
                    g.gadgets[g.shape->morphisms[current].tgt].sets[o]->size(), npos32);
        } else if (head == "component") {
            if (current == npos32)
                fail(ln.number, "component before any arrow line");
            std::string obj, sides, from, to;
            if (!split_once(rest, " : ", obj, sides) || !split_once(sides, "->", from, to))
                fail(ln.number, "expected 'component obj : e -> e''");
            std::uint32_t o = g.base->object_index(obj);
            if (o == npos32)
                fail(ln.number, "unknown base object '" + obj + "'");
            const Copresheaf& src = g.gadgets[g.shape->morphisms[current].tgt];
            const Copresheaf& dst = g.gadgets[g.shape->morphisms[current].src];
            std::uint32_t a = index_in(*src.sets[o], from, ln.number, "element");
            std::uint32_t b = index_in(*dst.sets[o], to, ln.number, "element");
            if (g.arrows[current].components[o][a] != npos32)
                fail(ln.number, "element '" + from + "' mapped twice");
            g.arrows[current].components[o][a] = b;
        } else {
            fail(ln.number, "unknown directive '" + head + "'");
        }
    }
    for (std::uint32_t f = 0; f < g.shape->morphism_count(); ++f) {
        if (!started[f]) {
            if (!g.shape->is_identity(f))
                throw ParseError("missing arrow block for '" + g.shape->morphisms[f].name + "'");
            auto& comp = g.arrows[f].components;
            comp.resize(g.base->object_count());
            for (std::uint32_t o = 0; o < g.base->object_count(); ++o) {
                comp[o].resize(g.gadgets[g.shape->morphisms[f].src].sets[o]->size());
                std::iota(comp[o].begin(), comp[o].end(), 0);
            }
            continue;
        }
        for (std::uint32_t o = 0; o < g.base->object_count(); ++o)
            for (std::uint32_t e = 0; e < g.arrows[f].components[o].size(); ++e)
                if (g.arrows[f].components[o][e] == npos32)
                    throw ParseError("arrow '" + g.shape->morphisms[f].name +
                                     "' misses a component entry at '" + g.base->objects[o] +
                                     "'");
    }
    throw_violations(validate_gadget(g), "gadget invalid");
    return g;
}

std::vector<std::pair<std::string, std::string>> serialize_gadget(const GadgetFunctor& g) {
    std::vector<std::pair<std::string, std::string>> files;
    std::string manifest = "shape shape.txt\nbase base.txt\n";
    for (std::uint32_t o = 0; o < g.shape->object_count(); ++o)
        manifest += "gadget " + g.shape->objects[o] + " = g" + std::to_string(o) + ".txt\n";
    manifest += "arrows arrows.txt\n";
    files.emplace_back("gadget.txt", std::move(manifest));
    files.emplace_back("shape.txt", serialize_category(*g.shape));
    files.emplace_back("base.txt", serialize_category(*g.base));
    for (std::uint32_t o = 0; o < g.shape->object_count(); ++o)
        files.emplace_back("g" + std::to_string(o) + ".txt",
                           serialize_copresheaf(g.gadgets[o], "base.txt"));
    std::string arrows;
    for (std::uint32_t f = 0; f < g.shape->morphism_count(); ++f) {
        if (g.shape->is_identity(f))
            continue;
        arrows += "arrow " + g.shape->morphisms[f].name + "\n";
        const Copresheaf& src = g.gadgets[g.shape->morphisms[f].tgt];
        const Copresheaf& dst = g.gadgets[g.shape->morphisms[f].src];
        for (std::uint32_t o = 0; o < g.base->object_count(); ++o)
            for (std::uint32_t e = 0; e < g.arrows[f].components[o].size(); ++e)
                arrows += "component " + g.base->objects[o] + " : " + (*src.sets[o])[e] +
                          " -> " + (*dst.sets[o])[g.arrows[f].components[o][e]] + "\n";
    }
    files.emplace_back("arrows.txt", std::move(arrows));
    return files;
}

}
