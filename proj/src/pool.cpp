#include "faircls/pool.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace faircls {

std::string to_string(Mode m) { return m == Mode::GroupAware ? "aware" : "unaware"; }

Mode mode_from_string(const std::string& s) {
    if (s == "aware") return Mode::GroupAware;
    if (s == "unaware") return Mode::GroupUnaware;
    throw std::invalid_argument("mode must be aware or unaware, got '" + s + "'");
}

bool FeatureSubset::contains(const Eigen::VectorXd& x) const {
    const double v = x[feature];
    switch (op) {
        case Op::Less: return v < value;
        case Op::LessEq: return v <= value;
        case Op::Greater: return v > value;
        case Op::GreaterEq: return v >= value;
    }
    return false;
}

std::string FeatureSubset::str() const {
    static const char* ops[] = {"<", "<=", ">", ">="};
    std::ostringstream os;
    os.precision(17);
    os << feature << ops[static_cast<int>(op)] << value;
    return os.str();
}

FeatureSubset FeatureSubset::parse(const std::string& s) {
    const auto pos = s.find_first_of("<>");
    if (pos == std::string::npos || pos == 0) throw std::invalid_argument("bad subset '" + s + "'");
    FeatureSubset out;
    out.feature = std::stoi(s.substr(0, pos));
    std::size_t vpos = pos + 1;
    const bool eq = vpos < s.size() && s[vpos] == '=';
    if (eq) ++vpos;
    if (s[pos] == '<') out.op = eq ? Op::LessEq : Op::Less;
    else out.op = eq ? Op::GreaterEq : Op::Greater;
    out.value = std::stod(s.substr(vpos));
    return out;
}

Eigen::VectorXd ExpectationPool::cell_mass_in_subset() const {
    if (in_subset.size() != rows()) throw std::logic_error("no feature subset attached to the pool");
    return post.transpose() * w.cwiseProduct(in_subset);
}

Eigen::VectorXd ExpectationPool::eta() const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(rows());
    for (int c = 1; c < cells(); c += 2) e += post.col(c);
    return e;
}

double ExpectationPool::error(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd e = eta();
    return w.dot((f.array() * (1.0 - e.array()) + (1.0 - f.array()) * e.array()).matrix());
}

void ExpectationPool::attach_subset(const FeatureSubset& s) {
    if (s.feature < 0 || s.feature >= x.cols()) throw std::out_of_range("subset feature index out of range");
    subset = s;
    in_subset.resize(rows());
    for (Eigen::Index i = 0; i < rows(); ++i) in_subset[i] = s.contains(x.row(i).transpose()) ? 1.0 : 0.0;
}

ExpectationPool make_pool(const DiscreteJointDistribution& dist, Mode mode) {
    using Key = std::tuple<std::vector<double>, int>;
    std::map<Key, int> index;
    std::vector<Key> order;
    const auto& layout = dist.layout();
    for (const auto& p : dist.points()) {
        Key k{std::vector<double>(p.x.data(), p.x.data() + p.x.size()),
              mode == Mode::GroupAware ? layout.tuple_index(p.z) : -1};
        if (index.emplace(k, static_cast<int>(order.size())).second) order.push_back(k);
    }
    const auto n = static_cast<Eigen::Index>(order.size());
    ExpectationPool pool;
    pool.mode = mode;
    pool.exact = true;
    pool.layout = layout;
    pool.x.resize(n, dist.dim());
    pool.tuple = Eigen::VectorXi::Constant(n, -1);
    pool.w = Eigen::VectorXd::Zero(n);
    pool.post = Eigen::MatrixXd::Zero(n, layout.cells());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& xs = std::get<0>(order[i]);
        pool.x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        pool.tuple[i] = std::get<1>(order[i]);
    }
    for (const auto& p : dist.points()) {
        Key k{std::vector<double>(p.x.data(), p.x.data() + p.x.size()),
              mode == Mode::GroupAware ? layout.tuple_index(p.z) : -1};
        const int i = index.at(k);
        pool.w[i] += p.mass;
        pool.post(i, dist.cell_of(p)) += p.mass;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (pool.w[i] > 0.0) pool.post.row(i) /= pool.w[i];
        else pool.post.row(i) = (mode == Mode::GroupAware ? dist.posterior(pool.x.row(i).transpose(), pool.tuple[i])
                                                          : dist.posterior(pool.x.row(i).transpose()))
                                    .p.transpose();
    }
    return pool;
}

ExpectationPool make_pool(const Oracle& dist, Mode mode, std::size_t draws, std::uint64_t seed) {
    if (draws == 0) throw std::invalid_argument("pool needs at least one draw");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(draws);
    ExpectationPool pool;
    pool.mode = mode;
    pool.exact = false;
    pool.layout = dist.layout();
    pool.x.resize(n, dist.dim());
    pool.tuple = Eigen::VectorXi::Constant(n, -1);
    pool.w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    pool.post.resize(n, dist.layout().cells());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Sample s = dist.draw(rng);
        pool.x.row(i) = s.features.transpose();
        if (mode == Mode::GroupAware) {
            pool.tuple[i] = dist.layout().tuple_index(s.sensitive);
            pool.post.row(i) = dist.posterior(s.features, pool.tuple[i]).p.transpose();
        } else {
            pool.post.row(i) = dist.posterior(s.features).p.transpose();
        }
    }
    return pool;
}

}  // namespace faircls

namespace faircls {

ExpectationPool make_pool(const Oracle& dist, Mode mode, const std::vector<Sample>& rows) {
    if (rows.empty()) throw std::invalid_argument("pool needs at least one row");
    const auto n = static_cast<Eigen::Index>(rows.size());
    ExpectationPool pool;
    pool.mode = mode;
    pool.exact = false;
    pool.layout = dist.layout();
    pool.x.resize(n, dist.dim());
    pool.tuple = Eigen::VectorXi::Constant(n, -1);
    pool.w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    pool.post.resize(n, dist.layout().cells());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Sample& s = rows[static_cast<std::size_t>(i)];
        pool.x.row(i) = s.features.transpose();
        if (mode == Mode::GroupAware) {
            pool.tuple[i] = dist.layout().tuple_index(s.sensitive);
            pool.post.row(i) = dist.posterior(s.features, pool.tuple[i]).p.transpose();
        } else {
            pool.post.row(i) = dist.posterior(s.features).p.transpose();
        }
    }
    return pool;
}

}  // namespace faircls
