#include "cspcat/findiag.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace cspcat {

NamedSetPtr make_set(std::vector<std::string> names) {
    return std::make_shared<const NamedSet>(std::move(names));
}

NamedSetPtr numbered_set(std::size_t n, const std::string& prefix) {
    NamedSet names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(prefix + std::to_string(i));
    return make_set(std::move(names));
}

ValidationReport validate_diagram(const FinDiagram& d) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };
    if (!d.shape) {
        complain("diagram has no shape category");
        return report;
    }
    const FinCategory& c = *d.shape;
    if (d.sets.size() != c.object_count() || d.maps.size() != c.morphism_count()) {
        complain("diagram tables do not cover the shape");
        return report;
    }
    for (std::uint32_t i = 0; i < d.sets.size(); ++i)
        if (!d.sets[i])
            complain("object " + c.objects[i] + " has no set");
    if (!report.ok())
        return report;
    for (std::uint32_t m = 0; m < d.maps.size(); ++m) {
        std::uint32_t si = c.morphisms[m].src, ti = c.morphisms[m].tgt;
        if (d.maps[m].size() != d.sets[si]->size()) {
            complain("map for " + c.morphisms[m].name + " is not total on its source set");
            continue;
        }
        for (std::uint32_t x : d.maps[m])
            if (x >= d.sets[ti]->size()) {
                complain("map for " + c.morphisms[m].name + " has an out-of-range value");
                break;
            }
    }
    if (!report.ok())
        return report;
    for (std::uint32_t i = 0; i < c.object_count(); ++i) {
        const auto& idmap = d.maps[c.identities[i]];
        for (std::uint32_t x = 0; x < idmap.size(); ++x)
            if (idmap[x] != x) {
                complain("identity of " + c.objects[i] + " does not act as the identity");
                break;
            }
    }
    for (const auto& [key, h] : c.composites) {
        std::uint32_t g = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t f = static_cast<std::uint32_t>(key & 0xffffffffu);
        for (std::uint32_t x = 0; x < d.maps[f].size(); ++x)
            if (d.maps[g][d.maps[f][x]] != d.maps[h][x]) {
                complain("functoriality fails on " + c.morphisms[g].name + " . " + c.morphisms[f].name);
                break;
            }
    }
    std::sort(report.violations.begin(), report.violations.end());
    return report;
}

namespace {

// Propagation state for the limit search.  Domains are alive flags with
// per-arc support counts, so one removal costs O(degree) and undoing a
// removal restores the counts exactly.
struct Solver {
    const FinDiagram& d;
    std::uint32_t n_vars;
    std::vector<std::uint32_t> offset;       // variable -> start in flat arrays
    std::vector<char> alive;
    std::vector<std::uint32_t> dom_size;
    std::vector<std::vector<std::uint32_t>> arcs_out;  // variable -> morphisms from it
    std::vector<std::vector<std::uint32_t>> arcs_in;
    std::vector<std::vector<std::uint32_t>> support;   // morphism -> per target element
    std::vector<std::vector<std::vector<std::uint32_t>>> inverse;  // morphism -> target elem -> sources
    std::vector<std::pair<std::uint32_t, std::uint32_t>> trail;
    // Which search level's assignment removed each value (level + 1; 0 means
    // preprocessing), so dead ends can name their culprits.
    std::vector<std::uint32_t> kill_code;
    std::uint32_t cur_code = 0;
    std::uint32_t dead_var = npos32;
    bool dead = false;

    explicit Solver(const FinDiagram& diagram) : d(diagram) {
        const FinCategory& c = *d.shape;
        n_vars = static_cast<std::uint32_t>(c.object_count());
        offset.resize(n_vars + 1, 0);
        for (std::uint32_t i = 0; i < n_vars; ++i)
            offset[i + 1] = offset[i] + static_cast<std::uint32_t>(d.sets[i]->size());
        alive.assign(offset[n_vars], 1);
        kill_code.assign(offset[n_vars], 0);
        dom_size.resize(n_vars);
        for (std::uint32_t i = 0; i < n_vars; ++i)
            dom_size[i] = static_cast<std::uint32_t>(d.sets[i]->size());
        arcs_out.resize(n_vars);
        arcs_in.resize(n_vars);
        support.resize(c.morphism_count());
        inverse.resize(c.morphism_count());
        for (std::uint32_t m = 0; m < c.morphism_count(); ++m) {
            if (c.is_identity(m))
                continue;
            std::uint32_t si = c.morphisms[m].src, ti = c.morphisms[m].tgt;
            arcs_out[si].push_back(m);
            arcs_in[ti].push_back(m);
            support[m].assign(d.sets[ti]->size(), 0);
            inverse[m].resize(d.sets[ti]->size());
            for (std::uint32_t a = 0; a < d.maps[m].size(); ++a) {
                ++support[m][d.maps[m][a]];
                inverse[m][d.maps[m][a]].push_back(a);
            }
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pending;

    bool is_alive(std::uint32_t var, std::uint32_t val) const {
        return alive[offset[var] + val];
    }

    // Applies the full effect of one removal (flag, trail, support counts)
    // and schedules the removals it forces.  Undo reverses exactly this.
    void kill(std::uint32_t var, std::uint32_t val) {
        if (!alive[offset[var] + val])
            return;
        alive[offset[var] + val] = 0;
        kill_code[offset[var] + val] = cur_code;
        trail.emplace_back(var, val);
        if (--dom_size[var] == 0) {
            dead = true;
            dead_var = var;
        }
        for (std::uint32_t m : arcs_out[var]) {
            std::uint32_t b = d.maps[m][val];
            if (--support[m][b] == 0)
                pending.emplace_back(d.shape->morphisms[m].tgt, b);
        }
        for (std::uint32_t m : arcs_in[var])
            for (std::uint32_t a : inverse[m][val])
                pending.emplace_back(d.shape->morphisms[m].src, a);
    }

    void remove(std::uint32_t var, std::uint32_t val) {
        kill(var, val);
        while (!pending.empty() && !dead) {
            auto [v, x] = pending.back();
            pending.pop_back();
            kill(v, x);
        }
        pending.clear();
    }

    void undo_to(std::size_t mark) {
        while (trail.size() > mark) {
            auto [var, val] = trail.back();
            trail.pop_back();
            alive[offset[var] + val] = 1;
            ++dom_size[var];
            for (std::uint32_t m : arcs_out[var])
                ++support[m][d.maps[m][val]];
        }
        dead = false;
    }

    bool initial_consistency() {
        const FinCategory& c = *d.shape;
        // Arc consistency checks each arrow on its own, so it never notices
        // that two parallel arrows (or a non-identity self-map) leave a value
        // without any joint support.  Those values are dead in every branch;
        // dropping them up front turns e.g. a loop edge into an immediate
        // refutation instead of a search.
        for (std::uint32_t v = 0; v < n_vars && !dead; ++v) {
            for (std::size_t i = 0; i < arcs_out[v].size(); ++i) {
                std::uint32_t m1 = arcs_out[v][i];
                if (c.morphisms[m1].tgt == v)
                    for (std::uint32_t a = 0; a < d.maps[m1].size() && !dead; ++a) {
                        if (alive[offset[v] + a] && d.maps[m1][a] != a)
                            remove(v, a);
                    }
                for (std::size_t j = i + 1; j < arcs_out[v].size(); ++j) {
                    std::uint32_t m2 = arcs_out[v][j];
                    if (c.morphisms[m1].tgt != c.morphisms[m2].tgt)
                        continue;
                    for (std::uint32_t a = 0; a < d.maps[m1].size() && !dead; ++a) {
                        if (alive[offset[v] + a] && d.maps[m1][a] != d.maps[m2][a])
                            remove(v, a);
                    }
                }
                if (dead)
                    return false;
            }
        }
        for (std::uint32_t m = 0; m < d.maps.size(); ++m) {
            if (d.shape->is_identity(m))
                continue;
            std::uint32_t ti = d.shape->morphisms[m].tgt;
            for (std::uint32_t b = 0; b < support[m].size(); ++b) {
                if (support[m][b] == 0)
                    remove(ti, b);
                if (dead)
                    return false;
            }
        }
        return !dead;
    }
};

}

LimitResult limit(const FinDiagram& d, SolveMode mode) {
    LimitResult result;
    const FinCategory& c = *d.shape;
    std::uint32_t n = static_cast<std::uint32_t>(c.object_count());

    for (std::uint32_t i = 0; i < n; ++i)
        if (d.sets[i]->empty())
            return result;

    Solver solver(d);
    if (!solver.initial_consistency())
        return result;

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return d.sets[a]->size() < d.sets[b]->size();
    });

    bool stop = false;

    auto record = [&]() {
        ++result.count;
        result.nonempty = true;
        if (mode == SolveMode::decide)
            stop = true;
        if (mode == SolveMode::decide || mode == SolveMode::enumerate) {
            SolutionTuple tuple(n);
            for (std::uint32_t i = 0; i < n; ++i) {
                for (std::uint32_t v = 0; v < d.sets[i]->size(); ++v)
                    if (solver.is_alive(i, v)) {
                        tuple[i] = v;
                        break;
                    }
            }
            result.solutions.push_back(std::move(tuple));
        }
    };

    // Iterative depth-first search: instances can have tens of thousands of
    // variables, so no per-variable recursion.  Deciding uses conflict-
    // directed backjumping -- a dead end names the levels whose assignments
    // pruned the wiped-out variable, and an exhausted level jumps to the
    // deepest named one instead of thrashing through unrelated levels.
    // Counting and enumeration backtrack chronologically.
    const bool cbj = mode == SolveMode::decide;
    std::vector<std::uint32_t> cursor(n, 0);
    std::vector<std::size_t> marks(n, 0);
    std::vector<std::set<std::uint32_t>> conf(cbj ? n : 0);
    std::uint32_t pos = 0;

    auto blame = [&](std::uint32_t level, std::uint32_t code) {
        if (code > 0 && code != level + 1)
            conf[level].insert(code - 1);
    };

    while (!stop) {
        if (pos == n) {
            record();
            if (stop || pos == 0)
                break;
            --pos;
            solver.undo_to(marks[pos]);
            ++cursor[pos];
            continue;
        }
        std::uint32_t var = order[pos];
        std::uint32_t size = static_cast<std::uint32_t>(d.sets[var]->size());
        std::uint32_t val = cursor[pos];
        while (val < size && !solver.is_alive(var, val)) {
            if (cbj)
                blame(pos, solver.kill_code[solver.offset[var] + val]);
            ++val;
        }
        cursor[pos] = val;
        if (val == size) {
            std::uint32_t j;
            if (cbj) {
                if (conf[pos].empty())
                    break;  // no earlier level is responsible: unsatisfiable
                j = *conf[pos].rbegin();
                for (std::uint32_t c : conf[pos])
                    if (c != j)
                        conf[j].insert(c);
                conf[pos].clear();
            } else {
                if (pos == 0)
                    break;
                j = pos - 1;
            }
            solver.undo_to(marks[j]);
            pos = j;
            ++cursor[pos];
            continue;
        }
        marks[pos] = solver.trail.size();
        solver.cur_code = pos + 1;
        for (std::uint32_t other = 0; other < size && !solver.dead; ++other)
            if (other != val && solver.is_alive(var, other))
                solver.remove(var, other);
        if (solver.dead) {
            if (cbj) {
                std::uint32_t v = solver.dead_var;
                for (std::uint32_t i = solver.offset[v]; i < solver.offset[v + 1]; ++i)
                    if (!solver.alive[i])
                        blame(pos, solver.kill_code[i]);
            }
            solver.undo_to(marks[pos]);
            ++cursor[pos];
            continue;
        }
        ++pos;
        if (pos < n) {
            cursor[pos] = 0;
            if (cbj)
                conf[pos].clear();
        }
    }

    if (mode == SolveMode::enumerate)
        std::sort(result.solutions.begin(), result.solutions.end());
    return result;
}

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
        // Keep the least index as the root so representatives fall out directly.
        if (b < a)
            std::swap(a, b);
        parent[b] = a;
    }
};

}

QuotientSet colimit(const FinDiagram& d) {
    const FinCategory& c = *d.shape;
    std::uint32_t n = static_cast<std::uint32_t>(c.object_count());
    std::vector<std::uint32_t> offset(n + 1, 0);
    for (std::uint32_t i = 0; i < n; ++i)
        offset[i + 1] = offset[i] + static_cast<std::uint32_t>(d.sets[i]->size());

    UnionFind uf(offset[n]);
    for (std::uint32_t m = 0; m < c.morphism_count(); ++m) {
        if (c.is_identity(m))
            continue;
        std::uint32_t si = c.morphisms[m].src, ti = c.morphisms[m].tgt;
        for (std::uint32_t a = 0; a < d.maps[m].size(); ++a)
            uf.unite(offset[si] + a, offset[ti] + d.maps[m][a]);
    }

    QuotientSet q;
    std::vector<std::uint32_t> class_of(offset[n], npos32);
    NamedSet names;
    q.injections.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        q.injections[i].resize(d.sets[i]->size());
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t x = 0; x < d.sets[i]->size(); ++x) {
            std::uint32_t root = uf.find(offset[i] + x);
            if (class_of[root] == npos32) {
                // Roots are the least members of their class, so fresh roots
                // appear here in canonical order.
                class_of[root] = static_cast<std::uint32_t>(q.representatives.size());
                q.representatives.emplace_back(i, x);
                names.push_back("(" + c.objects[i] + "," + (*d.sets[i])[x] + ")");
            }
            q.injections[i][x] = class_of[root];
        }
    }
    q.carrier = make_set(std::move(names));
    return q;
}

}
