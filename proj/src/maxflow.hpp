#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hm::detail {

// Dinic max-flow with integer capacities. Arcs are scanned in insertion
// order, so results are deterministic for a fixed construction order.
class MaxFlow {
public:
    using Cap = std::int64_t;
    static constexpr Cap inf = std::numeric_limits<Cap>::max() / 4;

    explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

    int add_node() {
        head_.push_back(-1);
        level_.push_back(0);
        it_.push_back(0);
        return static_cast<int>(head_.size()) - 1;
    }

    int add_arc(int from, int to, Cap cap) {
        if (cap < 0) throw std::invalid_argument("negative capacity");
        int id = static_cast<int>(to_.size());
        to_.push_back(to);
        cap_.push_back(cap);
        next_.push_back(-1);
        to_.push_back(from);
        cap_.push_back(0);
        next_.push_back(-1);
        link(from, id);
        link(to, id + 1);
        orig_.push_back(cap);
        orig_.push_back(0);
        return id;
    }

    Cap flow_on(int arc) const { return orig_[arc] - cap_[arc]; }
    Cap residual(int arc) const { return cap_[arc]; }
    int num_nodes() const { return static_cast<int>(head_.size()); }

    Cap run(int s, int t, Cap limit = inf) {
        Cap total = 0;
        while (total < limit && bfs(s, t)) {
            for (int v = 0; v < num_nodes(); ++v) it_[v] = first_[v];
            while (total < limit) {
                Cap f = dfs(s, t, limit - total);
                if (f == 0) break;
                total += f;
            }
        }
        return total;
    }

    // Nodes reachable from s in the residual network (valid after run()).
    std::vector<char> reachable(int s) const {
        std::vector<char> seen(num_nodes(), 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int a = first_[v]; a >= 0; a = next_[a])
                if (cap_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = 1;
                    stack.push_back(to_[a]);
                }
        }
        return seen;
    }

private:
    void link(int v, int arc) {
        // Append so adjacency order matches insertion order.
        if (first_.size() < head_.size()) first_.resize(head_.size(), -1);
        if (head_[v] < 0) first_[v] = arc;
        else next_[head_[v]] = arc;
        head_[v] = arc;
    }

    bool bfs(int s, int t) {
        if (first_.size() < head_.size()) first_.resize(head_.size(), -1);
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<int> q{s};
        level_[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int a = first_[v]; a >= 0; a = next_[a])
                if (cap_[a] > 0 && level_[to_[a]] < 0) {
                    level_[to_[a]] = level_[v] + 1;
                    q.push_back(to_[a]);
                }
        }
        return level_[t] >= 0;
    }

    Cap dfs(int v, int t, Cap pushed) {
        if (v == t) return pushed;
        for (int& a = it_[v]; a >= 0; a = next_[a]) {
            int u = to_[a];
            if (cap_[a] <= 0 || level_[u] != level_[v] + 1) continue;
            Cap f = dfs(u, t, std::min(pushed, cap_[a]));
            if (f > 0) {
                cap_[a] -= f;
                cap_[a ^ 1] += f;
                return f;
            }
        }
        return 0;
    }

    std::vector<int> head_, first_, next_, to_, level_, it_;
    std::vector<Cap> cap_, orig_;
};

// Feasible flow with lower bounds on a network given as arcs (from, to, lo, hi)
// from s to t. Returns per-arc flow or empty when infeasible.
struct BoundedArc {
    int from, to;
    std::int64_t lo, hi;
};

inline bool bounded_flow(int n, int s, int t, const std::vector<BoundedArc>& arcs, std::vector<std::int64_t>& flow) {
    MaxFlow mf(n + 2);
    int ss = n, tt = n + 1;
    std::vector<std::int64_t> excess(n, 0);
    std::vector<int> ids;
    ids.reserve(arcs.size());
    for (const auto& a : arcs) {
        if (a.lo > a.hi) return false;
        ids.push_back(mf.add_arc(a.from, a.to, a.hi - a.lo));
        excess[a.to] += a.lo;
        excess[a.from] -= a.lo;
    }
    mf.add_arc(t, s, MaxFlow::inf);
    std::int64_t need = 0;
    for (int v = 0; v < n; ++v) {
        if (excess[v] > 0) {
            mf.add_arc(ss, v, excess[v]);
            need += excess[v];
        } else if (excess[v] < 0) {
            mf.add_arc(v, tt, -excess[v]);
        }
    }
    if (mf.run(ss, tt) != need) return false;
    flow.resize(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) flow[i] = arcs[i].lo + mf.flow_on(ids[i]);
    return true;
}

}  // namespace hm::detail
