#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unfollow/corpus.h"

namespace unfollow {

// Directed mention network. Nodes are users with at least one incident edge,
// kept in corpus order; adjacency lists are sorted and duplicate-free.
struct MentionGraph {
    std::vector<std::string> nodes;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> in;

    std::size_t size() const { return nodes.size(); }
    std::size_t edge_count() const;
    std::optional<std::size_t> find(const std::string& user_id) const;
};

// Edge a->b iff a mentions b at least once. Handles resolve to user ids
// case-insensitively; unknown handles and self-mentions are ignored.
MentionGraph build_mention_graph(std::span<const std::string> user_ids,
                                 std::span<const std::vector<std::string>> mentioned_handles);
MentionGraph build_mention_graph(std::span<const UserRecord> users);

struct NodeCentrality {
    double in_deg = 0.0;
    double out_deg = 0.0;
    double betweenness = 0.0;
    double closeness = 0.0;
    double eigenvector = 0.0;
    double clustering = 0.0;
};

// Indexed like MentionGraph::nodes.
std::vector<NodeCentrality> centralities(const MentionGraph& g);

// Brandes over directed edges, normalized by (n-1)(n-2); zero when n < 3.
std::vector<double> betweenness_centrality(const MentionGraph& g);
// Reachable count over the summed distance to reachable nodes, following out-edges.
std::vector<double> closeness_centrality(const MentionGraph& g);

// Sorted, duplicate-free neighbor lists of the undirected projection.
std::vector<std::vector<std::size_t>> undirected_projection(const MentionGraph& g);

struct EigenResult {
    std::vector<double> vector;  // L2-normalized, non-negative
    double eigenvalue = 0.0;
    double residual = 0.0;       // ||Ax - lambda x||_2
    std::size_t iterations = 0;
};

// Power iteration on A + I, which shares A's eigenvectors and
// avoids oscillation on bipartite graphs. Stops once the residual is below `tolerance`.
EigenResult eigenvector_centrality(const std::vector<std::vector<std::size_t>>& adjacency,
                                   double tolerance = 1e-8, std::size_t max_iterations = 100000);

// Local clustering coefficient on undirected neighbor lists; zero below degree 2.
std::vector<double> clustering_coefficients(const std::vector<std::vector<std::size_t>>& adjacency);

// |a ∩ b| / |a ∪ b| over sorted duplicate-free inputs; 0 when both are empty.
double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct SimilarityEdge {
    std::size_t neighbor = 0;
    double weight = 0.0;
};

// Undirected, self-loop free. Node i is user i of the input.
struct SimilarityGraph {
    std::vector<std::vector<SimilarityEdge>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    std::size_t edge_count() const;
    std::vector<std::vector<std::size_t>> neighbor_lists() const;
};

// Token sets are sorted vocabulary ids, one per user.
SimilarityGraph build_similarity_graph(std::span<const std::vector<std::size_t>> token_sets,
                                       double threshold = 0.3);

// Maps per-user token lists to sorted id sets over a shared vocabulary.
std::vector<std::vector<std::size_t>> token_id_sets(std::span<const std::vector<std::string>> docs);

// Subgraph on nodes where keep[i] is true, reindexed in order.
SimilarityGraph induced_subgraph(const SimilarityGraph& g, const std::vector<bool>& keep);

// Labels: 1 Loser, 0 Stable, std::nullopt unlabeled. Majority over labeled
// neighbors; ties, no labeled neighbors, or an absent node give 0.5.
double neighbor_majority_class(const SimilarityGraph& g, std::optional<std::size_t> node,
                               std::span<const std::optional<int>> labels);

struct GraphFeatures {
    double in_deg = 0.0;
    double out_deg = 0.0;
    double betweenness = 0.0;
    double closeness = 0.0;
    double eigenvector = 0.0;
    double clustering = 0.0;
    double in_mention_graph = 0.0;
    double sim_neighbor_majority = 0.5;
    double sim_clustering = 0.0;
};

// `src<TAB>dst` lines for the mention graph, `src<TAB>dst<TAB>weight` for the
// similarity graph (each undirected edge once, src < dst).
void write_edge_list(const MentionGraph& g, std::ostream& out);
void write_edge_list(const SimilarityGraph& g, std::span<const std::string> names, std::ostream& out);

}  // namespace unfollow
