#include "unfollow/graph_features.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <set>

namespace unfollow {
namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void sort_unique(std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::size_t MentionGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& o : out) n += o.size();
    return n;
}

std::optional<std::size_t> MentionGraph::find(const std::string& user_id) const {
    auto it = index.find(user_id);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

MentionGraph build_mention_graph(std::span<const std::string> user_ids,
                                 std::span<const std::vector<std::string>> mentioned_handles) {
    std::unordered_map<std::string, std::size_t> by_handle;
    for (std::size_t i = 0; i < user_ids.size(); ++i) by_handle.try_emplace(lowercase(user_ids[i]), i);

    std::vector<std::vector<std::size_t>> out(user_ids.size());
    for (std::size_t a = 0; a < user_ids.size() && a < mentioned_handles.size(); ++a) {
        for (const auto& handle : mentioned_handles[a]) {
            auto it = by_handle.find(lowercase(handle));
            if (it == by_handle.end() || it->second == a) continue;
            out[a].push_back(it->second);
        }
        sort_unique(out[a]);
    }
    std::vector<bool> present(user_ids.size(), false);
    for (std::size_t a = 0; a < out.size(); ++a) {
        if (!out[a].empty()) present[a] = true;
        for (std::size_t b : out[a]) present[b] = true;
    }

    MentionGraph g;
    std::vector<std::size_t> remap(user_ids.size(), 0);
    for (std::size_t i = 0; i < user_ids.size(); ++i) {
        if (!present[i]) continue;
        remap[i] = g.nodes.size();
        g.index.emplace(user_ids[i], g.nodes.size());
        g.nodes.push_back(user_ids[i]);
    }
    g.out.resize(g.nodes.size());
    g.in.resize(g.nodes.size());
    for (std::size_t a = 0; a < out.size(); ++a) {
        for (std::size_t b : out[a]) {
            g.out[remap[a]].push_back(remap[b]);
            g.in[remap[b]].push_back(remap[a]);
        }
    }
    for (auto& v : g.in) std::sort(v.begin(), v.end());
    return g;
}

MentionGraph build_mention_graph(std::span<const UserRecord> users) {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> handles;
    ids.reserve(users.size());
    handles.reserve(users.size());
    for (const auto& u : users) {
        ids.push_back(u.user_id);
        std::vector<std::string> h;
        for (const auto& t : u.tweets) h.insert(h.end(), t.mentions.begin(), t.mentions.end());
        handles.push_back(std::move(h));
    }
    return build_mention_graph(ids, handles);
}

std::vector<double> betweenness_centrality(const MentionGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> cb(n, 0.0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<double> sigma(n);
    std::vector<long> dist(n);
    std::vector<double> delta(n);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        stack.clear();
        for (auto& p : preds) p.clear();
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            stack.push_back(v);
            for (std::size_t w : g.out[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const std::size_t w = *it;
            for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
        }
    }
    if (n < 3) return std::vector<double>(n, 0.0);
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (auto& c : cb) c /= norm;
    return cb;
}

std::vector<double> closeness_centrality(const MentionGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> cc(n, 0.0);
    std::vector<long> dist(n);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        queue.assign(1, s);
        std::size_t reached = 0;
        double total = 0.0;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w : g.out[v]) {
                if (dist[w] >= 0) continue;
                dist[w] = dist[v] + 1;
                ++reached;
                total += static_cast<double>(dist[w]);
                queue.push_back(w);
            }
        }
        cc[s] = reached == 0 ? 0.0 : static_cast<double>(reached) / total;
    }
    return cc;
}

std::vector<std::vector<std::size_t>> undirected_projection(const MentionGraph& g) {
    std::vector<std::vector<std::size_t>> adj(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        adj[v] = g.out[v];
        adj[v].insert(adj[v].end(), g.in[v].begin(), g.in[v].end());
        sort_unique(adj[v]);
    }
    return adj;
}

EigenResult eigenvector_centrality(const std::vector<std::vector<std::size_t>>& adjacency,
                                   double tolerance, std::size_t max_iterations) {
    const std::size_t n = adjacency.size();
    EigenResult r;
    if (n == 0) return r;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> ax(n);
    auto multiply = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0.0;
            for (std::size_t w : adjacency[v]) s += in[w];
            out[v] = s;
        }
    };
    auto update_residual = [&] {
        multiply(x, ax);
        double lambda = 0.0;
        for (std::size_t v = 0; v < n; ++v) lambda += x[v] * ax[v];
        double res = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double d = ax[v] - lambda * x[v];
            res += d * d;
        }
        r.eigenvalue = lambda;
        r.residual = std::sqrt(res);
    };
    update_residual();
    while (r.residual >= tolerance && r.iterations < max_iterations) {
        // ax holds A x; the shifted step is (A + I) x.
        double norm = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            ax[v] += x[v];
            norm += ax[v] * ax[v];
        }
        norm = std::sqrt(norm);
        for (std::size_t v = 0; v < n; ++v) x[v] = ax[v] / norm;
        ++r.iterations;
        update_residual();
    }
    r.vector = std::move(x);
    return r;
}

std::vector<double> clustering_coefficients(const std::vector<std::vector<std::size_t>>& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<double> cc(n, 0.0);
    std::vector<char> mark(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const auto& nb = adjacency[v];
        const std::size_t d = nb.size();
        if (d < 2) continue;
        for (std::size_t u : nb) mark[u] = 1;
        std::size_t links = 0;
        for (std::size_t u : nb) {
            for (std::size_t w : adjacency[u]) {
                if (mark[w]) ++links;
            }
        }
        for (std::size_t u : nb) mark[u] = 0;
        // each neighbor-neighbor link was seen from both ends
        cc[v] = static_cast<double>(links) / static_cast<double>(d * (d - 1));
    }
    return cc;
}

std::vector<NodeCentrality> centralities(const MentionGraph& g) {
    const std::size_t n = g.size();
    std::vector<NodeCentrality> out(n);
    if (n == 0) return out;
    const auto bet = betweenness_centrality(g);
    const auto clo = closeness_centrality(g);
    const auto proj = undirected_projection(g);
    const auto eig = eigenvector_centrality(proj);
    const auto clu = clustering_coefficients(proj);
    const double degree_norm = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (std::size_t v = 0; v < n; ++v) {
        out[v].in_deg = static_cast<double>(g.in[v].size()) / degree_norm;
        out[v].out_deg = static_cast<double>(g.out[v].size()) / degree_norm;
        out[v].betweenness = bet[v];
        out[v].closeness = clo[v];
        out[v].eigenvector = std::max(0.0, eig.vector[v]);
        out[v].clustering = clu[v];
    }
    return out;
}

double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::set<std::string> sa(a.begin(), a.end());
    const std::set<std::string> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& w : sa) common += sb.count(w);
    return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

std::size_t SimilarityGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& a : adjacency) n += a.size();
    return n / 2;
}

std::vector<std::vector<std::size_t>> SimilarityGraph::neighbor_lists() const {
    std::vector<std::vector<std::size_t>> out(adjacency.size());
    for (std::size_t v = 0; v < adjacency.size(); ++v) {
        for (const auto& e : adjacency[v]) out[v].push_back(e.neighbor);
    }
    return out;
}

std::vector<std::vector<std::size_t>> token_id_sets(std::span<const std::vector<std::string>> docs) {
    std::map<std::string, std::size_t> vocab;
    for (const auto& doc : docs) {
        for (const auto& w : doc) vocab.try_emplace(w, 0);
    }
    std::size_t next = 0;
    for (auto& [_, id] : vocab) id = next++;
    std::vector<std::vector<std::size_t>> sets;
    sets.reserve(docs.size());
    for (const auto& doc : docs) {
        std::vector<std::size_t> ids;
        ids.reserve(doc.size());
        for (const auto& w : doc) ids.push_back(vocab.at(w));
        sort_unique(ids);
        sets.push_back(std::move(ids));
    }
    return sets;
}

SimilarityGraph build_similarity_graph(std::span<const std::vector<std::size_t>> token_sets,
                                       double threshold) {
    SimilarityGraph g;
    const std::size_t n = token_sets.size();
    g.adjacency.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double w = jaccard(token_sets[a], token_sets[b]);
            if (w < threshold || w == 0.0) continue;
            g.adjacency[a].push_back({b, w});
            g.adjacency[b].push_back({a, w});
        }
    }
    return g;
}

SimilarityGraph induced_subgraph(const SimilarityGraph& g, const std::vector<bool>& keep) {
    std::vector<std::size_t> remap(g.size(), 0);
    std::size_t next = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (keep[v]) remap[v] = next++;
    }
    SimilarityGraph sub;
    sub.adjacency.resize(next);
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!keep[v]) continue;
        for (const auto& e : g.adjacency[v]) {
            if (keep[e.neighbor]) sub.adjacency[remap[v]].push_back({remap[e.neighbor], e.weight});
        }
    }
    return sub;
}

double neighbor_majority_class(const SimilarityGraph& g, std::optional<std::size_t> node,
                               std::span<const std::optional<int>> labels) {
    if (!node || *node >= g.size()) return 0.5;
    std::size_t losers = 0;
    std::size_t stables = 0;
    for (const auto& e : g.adjacency[*node]) {
        if (e.neighbor >= labels.size() || !labels[e.neighbor]) continue;
        if (*labels[e.neighbor] == 1) {
            ++losers;
        } else {
            ++stables;
        }
    }
    if (losers > stables) return 1.0;
    if (stables > losers) return 0.0;
    return 0.5;
}

void write_edge_list(const MentionGraph& g, std::ostream& out) {
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b : g.out[a]) out << g.nodes[a] << '\t' << g.nodes[b] << '\n';
    }
}

void write_edge_list(const SimilarityGraph& g, std::span<const std::string> names, std::ostream& out) {
    const auto precision = out.precision(17);
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (const auto& e : g.adjacency[a]) {
            if (e.neighbor > a) out << names[a] << '\t' << names[e.neighbor] << '\t' << e.weight << '\n';
        }
    }
    out.precision(precision);
}

}  // namespace unfollow
