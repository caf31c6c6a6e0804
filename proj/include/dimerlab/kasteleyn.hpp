#pragma once

#include "dimerlab/lattice.hpp"

#include <Eigen/Dense>
#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <list>
#include <unordered_map>

namespace dimerlab {

// Kasteleyn system of a region: the white x black adjacency matrix (the
// honeycomb needs no signs: every face has 6 = 2 mod 4 edges), a lazy LU
// factorization, and cached columns of K^{-1}.
class KasteleynSystem {
public:
    // Throws NonSquare when |whites| != |blacks|.
    static KasteleynSystem assemble(const Region& region);
    // Records non-squareness instead of throwing; count_matchings_exact
    // then returns 0 and inverse access throws NonSquare.
    static KasteleynSystem assemble_allowing_nonsquare(const Region& region);

    const Region& region() const { return *region_; }
    bool square() const { return square_; }
    const Eigen::MatrixXd& matrix() const { return K_; }

    // |det K| by fraction-free integer elimination; equals the number of
    // perfect matchings.  Returns 0 for non-square systems.
    mpz_class count_matchings_exact() const;

    // Entries of K^{-1} (black row, white column), one triangular solve per
    // requested column, cached with an LRU budget.
    double inverse_entry(int black_idx, int white_idx) const;
    std::shared_ptr<const Eigen::VectorXd> inverse_column(int white_idx) const;

    // Whole inverse; computed once on first request.
    const Eigen::MatrixXd& full_inverse() const;

    double edge_probability(int edge_idx) const;
    std::vector<double> edge_probabilities() const;
    double joint_edge_probability(const std::vector<int>& edge_idxs) const;

    void set_column_cache_limit(size_t max_columns) const;

private:
    explicit KasteleynSystem(const Region& region, bool allow_nonsquare);
    const Eigen::PartialPivLU<Eigen::MatrixXd>& lu() const;
    void require_invertible() const;

    const Region* region_;
    Eigen::MatrixXd K_;
    bool square_ = false;

    mutable std::mutex mutex_;
    mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
    mutable std::unique_ptr<Eigen::MatrixXd> full_inverse_;
    mutable std::unordered_map<int, std::shared_ptr<const Eigen::VectorXd>> column_cache_;
    mutable std::list<int> column_lru_;
    mutable size_t cache_limit_ = 4096;
};

// |det| of an integer matrix by Bareiss fraction-free elimination.
mpz_class bareiss_abs_determinant(std::vector<std::vector<mpz_class>> m);

} // namespace dimerlab
