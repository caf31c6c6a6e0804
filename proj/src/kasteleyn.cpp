#include "dimerlab/kasteleyn.hpp"

#include <algorithm>

namespace dimerlab {

KasteleynSystem::KasteleynSystem(const Region& region, bool allow_nonsquare) : region_(&region) {
    square_ = region.white_count() == region.black_count();
    if (!square_ && !allow_nonsquare)
        throw Error(Errc::NonSquare, "region has " + std::to_string(region.white_count()) +
                                         " whites and " + std::to_string(region.black_count()) +
                                         " blacks");
    K_ = Eigen::MatrixXd::Zero(region.white_count(), region.black_count());
    for (int ei = 0; ei < region.edge_count(); ++ei)
        K_(region.edge_white_index(ei), region.edge_black_index(ei)) = 1.0;
}

KasteleynSystem KasteleynSystem::assemble(const Region& region) {
    return KasteleynSystem(region, false);
}

KasteleynSystem KasteleynSystem::assemble_allowing_nonsquare(const Region& region) {
    return KasteleynSystem(region, true);
}

mpz_class bareiss_abs_determinant(std::vector<std::vector<mpz_class>> m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    mpz_class det = m[n - 1][n - 1] * sign;
    return abs(det);
}

mpz_class KasteleynSystem::count_matchings_exact() const {
    if (!square_) return 0;
    const int n = region_->white_count();
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, 0));
    for (int ei = 0; ei < region_->edge_count(); ++ei)
        m[region_->edge_white_index(ei)][region_->edge_black_index(ei)] = 1;
    return bareiss_abs_determinant(std::move(m));
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& KasteleynSystem::lu() const {
    if (!lu_) lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(K_);
    return *lu_;
}

void KasteleynSystem::require_invertible() const {
    if (!square_) throw Error(Errc::NonSquare, "inverse of a non-square Kasteleyn matrix");
    if (K_.rows() == 0) return;
    if (lu().rcond() < 1e-14)
        throw Error(Errc::SingularMatrix, "Kasteleyn matrix is singular or near-singular");
}

std::shared_ptr<const Eigen::VectorXd> KasteleynSystem::inverse_column(int white_idx) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = column_cache_.find(white_idx);
    if (it != column_cache_.end()) {
        column_lru_.remove(white_idx);
        column_lru_.push_front(white_idx);
        return it->second;
    }
    require_invertible();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(K_.rows());
    e(white_idx) = 1.0;
    auto col = std::make_shared<Eigen::VectorXd>(lu().solve(e));
    column_cache_[white_idx] = col;
    column_lru_.push_front(white_idx);
    while (column_lru_.size() > cache_limit_) {
        column_cache_.erase(column_lru_.back());
        column_lru_.pop_back();
    }
    return col;
}

double KasteleynSystem::inverse_entry(int black_idx, int white_idx) const {
    return (*inverse_column(white_idx))(black_idx);
}

const Eigen::MatrixXd& KasteleynSystem::full_inverse() const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!full_inverse_) {
        require_invertible();
        full_inverse_ = std::make_unique<Eigen::MatrixXd>(lu().inverse());
    }
    return *full_inverse_;
}

double KasteleynSystem::edge_probability(int edge_idx) const {
    const int wi = region_->edge_white_index(edge_idx);
    const int bi = region_->edge_black_index(edge_idx);
    return K_(wi, bi) * inverse_entry(bi, wi);
}

std::vector<double> KasteleynSystem::edge_probabilities() const {
    std::vector<double> probs(region_->edge_count());
    for (int ei = 0; ei < region_->edge_count(); ++ei) probs[ei] = edge_probability(ei);
    return probs;
}

double KasteleynSystem::joint_edge_probability(const std::vector<int>& edge_idxs) const {
    const int k = static_cast<int>(edge_idxs.size());
    if (k == 0) throw Error(Errc::BadInput, "need at least one edge");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (edge_idxs[i] == edge_idxs[j])
                throw Error(Errc::BadInput, "edges must be distinct");
    Eigen::MatrixXd minor(k, k);
    double prefactor = 1.0;
    for (int i = 0; i < k; ++i) {
        prefactor *= K_(region_->edge_white_index(edge_idxs[i]), region_->edge_black_index(edge_idxs[i]));
        for (int j = 0; j < k; ++j) {
            minor(i, j) = inverse_entry(region_->edge_black_index(edge_idxs[i]),
                                        region_->edge_white_index(edge_idxs[j]));
        }
    }
    return prefactor * minor.determinant();
}

void KasteleynSystem::set_column_cache_limit(size_t max_columns) const {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_limit_ = std::max<size_t>(1, max_columns);
    while (column_lru_.size() > cache_limit_) {
        column_cache_.erase(column_lru_.back());
        column_lru_.pop_back();
    }
}

} // namespace dimerlab
