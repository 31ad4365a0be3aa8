#include "prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace marton {

namespace {

constexpr double kPmfTol = 1e-12;
constexpr double kLog2 = 0.6931471805599453094;

double xlogx(double p) {
    return p > 0.0 ? p * std::log(p) : 0.0;
}

}  // namespace

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("binary_entropy: p outside [0,1]");
    return -(xlogx(p) + xlogx(1.0 - p)) / kLog2;
}

Channel::Channel(int input_size, int output_size, std::vector<double> pmf)
    : input_size_(input_size), output_size_(output_size), pmf_(std::move(pmf)) {
    if (input_size_ < 1 || output_size_ < 1)
        throw model_error("Channel: alphabet sizes must be positive");
    if (static_cast<int>(pmf_.size()) != input_size_ * output_size_)
        throw model_error("Channel: pmf table size mismatch");
    for (int x = 0; x < input_size_; ++x) {
        double row = 0.0;
        for (int y = 0; y < output_size_; ++y) {
            double v = pmf_[x * output_size_ + y];
            if (v < -kPmfTol || v > 1.0 + kPmfTol)
                throw model_error("Channel: probability outside [0,1]");
            row += v;
        }
        if (std::abs(row - 1.0) > kPmfTol)
            throw model_error("Channel: row does not sum to 1");
    }
}

Channel Channel::bsc(double crossover) {
    if (crossover < 0.0 || crossover > 1.0)
        throw model_error("bsc: crossover outside [0,1]");
    return Channel(2, 2, {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

Channel Channel::bec(double erasure) {
    if (erasure < 0.0 || erasure > 1.0)
        throw model_error("bec: erasure outside [0,1]");
    return Channel(2, 3, {1.0 - erasure, 0.0, erasure, 0.0, 1.0 - erasure, erasure});
}

Channel Channel::identity(int alphabet) {
    std::vector<double> pmf(alphabet * alphabet, 0.0);
    for (int x = 0; x < alphabet; ++x) pmf[x * alphabet + x] = 1.0;
    return Channel(alphabet, alphabet, std::move(pmf));
}

JointPmf::JointPmf(std::vector<std::string> names, std::vector<int> cards,
                   std::vector<double> probs)
    : names_(std::move(names)), cards_(std::move(cards)), probs_(std::move(probs)) {
    if (names_.size() != cards_.size())
        throw model_error("JointPmf: names/cards size mismatch");
    std::size_t total = 1;
    for (int c : cards_) {
        if (c < 1) throw model_error("JointPmf: cardinality must be positive");
        total *= static_cast<std::size_t>(c);
    }
    if (probs_.size() != total)
        throw model_error("JointPmf: probability table size mismatch");
    double sum = 0.0;
    for (double v : probs_) {
        if (v < -kPmfTol) throw model_error("JointPmf: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw model_error("JointPmf: table does not sum to 1");
}

std::vector<int> JointPmf::indices_of(std::span<const std::string> vars) const {
    std::vector<int> idx;
    idx.reserve(vars.size());
    for (const auto& v : vars) {
        auto it = std::find(names_.begin(), names_.end(), v);
        if (it == names_.end())
            throw model_error("JointPmf: unknown variable " + v);
        idx.push_back(static_cast<int>(it - names_.begin()));
    }
    return idx;
}

double JointPmf::group_entropy(const std::vector<int>& idx) const {
    // Marginalize onto the selected variables, then sum -p log p.
    std::vector<int> stride(cards_.size());
    int s = 1;
    for (int j = static_cast<int>(cards_.size()) - 1; j >= 0; --j) {
        stride[j] = s;
        s *= cards_[j];
    }
    int msize = 1;
    for (int j : idx) msize *= cards_[j];
    std::vector<double> marg(msize, 0.0);
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
        int key = 0;
        for (int j : idx) {
            int val = (static_cast<int>(flat) / stride[j]) % cards_[j];
            key = key * cards_[j] + val;
        }
        marg[key] += probs_[flat];
    }
    double h = 0.0;
    for (double p : marg) h -= xlogx(p);
    return h / kLog2;
}

double JointPmf::entropy(std::span<const std::string> vars) const {
    auto idx = indices_of(vars);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return group_entropy(idx);
}

double JointPmf::conditional_entropy(std::span<const std::string> of,
                                     std::span<const std::string> given) const {
    auto a = indices_of(of);
    auto b = indices_of(given);
    std::vector<int> both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::sort(both.begin(), both.end());
    both.erase(std::unique(both.begin(), both.end()), both.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return group_entropy(both) - group_entropy(b);
}

double JointPmf::mutual_information(std::span<const std::string> a,
                                    std::span<const std::string> b,
                                    std::span<const std::string> given) const {
    auto ia = indices_of(a);
    auto ib = indices_of(b);
    auto ig = indices_of(given);
    auto dedup = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    auto join = [&](const std::vector<int>& u, const std::vector<int>& w) {
        std::vector<int> r = u;
        r.insert(r.end(), w.begin(), w.end());
        return dedup(std::move(r));
    };
    auto ag = join(ia, ig);
    auto bg = join(ib, ig);
    auto abg = join(ag, ib);
    auto g = dedup(ig);
    // I(A;B|G) = H(A,G) + H(B,G) - H(A,B,G) - H(G)
    double h = group_entropy(ag) + group_entropy(bg) - group_entropy(abg);
    if (!g.empty()) h -= group_entropy(g);
    return h;
}

double JointPmf::entropy(std::initializer_list<std::string> vars) const {
    std::vector<std::string> v(vars);
    return entropy(std::span<const std::string>(v));
}

double JointPmf::mutual_information(std::initializer_list<std::string> a,
                                    std::initializer_list<std::string> b,
                                    std::initializer_list<std::string> given) const {
    std::vector<std::string> va(a), vb(b), vg(given);
    return mutual_information(std::span<const std::string>(va),
                              std::span<const std::string>(vb),
                              std::span<const std::string>(vg));
}

PairwiseJoint::PairwiseJoint(int side, std::vector<double> probs)
    : side_size(side), p(std::move(probs)) {
    if (side_size < 1) throw model_error("PairwiseJoint: empty side alphabet");
    if (static_cast<int>(p.size()) != 2 * side_size)
        throw model_error("PairwiseJoint: table size mismatch");
    double sum = 0.0;
    for (double v : p) {
        if (v < -kPmfTol) throw model_error("PairwiseJoint: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw model_error("PairwiseJoint: table does not sum to 1");
}

PairwiseJoint PairwiseJoint::source_only(double p1) {
    return PairwiseJoint(1, {1.0 - p1, p1});
}

AuxModel::AuxModel(int arity, std::vector<double> joint, int input_size,
                   std::vector<int> phi)
    : arity_(arity), input_size_(input_size), joint_(std::move(joint)),
      phi_(std::move(phi)) {
    if (arity_ < 1 || arity_ > 3)
        throw model_error("AuxModel: arity must be 1, 2 or 3");
    num_vars_ = (arity_ == 1) ? 2 : arity_;
    if (static_cast<int>(joint_.size()) != (1 << num_vars_))
        throw model_error("AuxModel: joint table size mismatch");
    double sum = 0.0;
    for (double v : joint_) {
        if (v < -kPmfTol) throw model_error("AuxModel: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kPmfTol * joint_.size())
        throw model_error("AuxModel: joint does not sum to 1");
    if (arity_ == 1) {
        if (input_size_ != 2)
            throw model_error("AuxModel: arity-1 model has binary X");
        phi_.clear();
    } else {
        if (static_cast<int>(phi_.size()) != (1 << arity_))
            throw model_error("AuxModel: phi must be total");
        for (int v : phi_)
            if (v < 0 || v >= input_size_)
                throw model_error("AuxModel: phi value outside input alphabet");
    }
}

AuxModel AuxModel::pair_vx(std::vector<double> joint_vx) {
    return AuxModel(1, std::move(joint_vx), 2, {});
}

int AuxModel::channel_input(std::span<const int> aux_values) const {
    if (static_cast<int>(aux_values.size()) != num_vars_)
        throw model_error("AuxModel: wrong number of auxiliary values");
    if (arity_ == 1) return aux_values[1];
    int flat = 0;
    for (int v : aux_values) flat = (flat << 1) | (v & 1);
    return phi_[flat];
}

std::vector<std::string> AuxModel::var_names() const {
    switch (arity_) {
        case 1: return {"V", "X"};
        case 2: return {"V1", "V2"};
        default: return {"V", "V1", "V2"};
    }
}

JointPmf AuxModel::with_channels(std::span<const Channel* const> channels) const {
    std::vector<std::string> names = var_names();
    std::vector<int> cards(names.size(), 2);
    bool explicit_x = (arity_ >= 2);
    if (explicit_x) {
        names.push_back("X");
        cards.push_back(input_size_);
    }
    for (std::size_t l = 0; l < channels.size(); ++l) {
        if (channels[l]->input_size() != input_size_)
            throw model_error("AuxModel: channel input alphabet mismatch");
        names.push_back("Y" + std::to_string(l + 1));
        cards.push_back(channels[l]->output_size());
    }
    std::size_t total = 1;
    for (int c : cards) total *= static_cast<std::size_t>(c);
    std::vector<double> probs(total, 0.0);

    std::vector<int> vals(num_vars_);
    int ytotal = 1;
    for (std::size_t l = 0; l < channels.size(); ++l)
        ytotal *= channels[l]->output_size();
    for (int a = 0; a < (1 << num_vars_); ++a) {
        double pa = joint_[a];
        if (pa == 0.0) continue;
        for (int j = 0; j < num_vars_; ++j)
            vals[j] = (a >> (num_vars_ - 1 - j)) & 1;
        int x = channel_input(vals);
        for (int ys = 0; ys < ytotal; ++ys) {
            double w = pa;
            std::size_t flat = static_cast<std::size_t>(a);
            if (explicit_x) flat = flat * input_size_ + x;
            int rem = ys;
            for (std::size_t l = 0; l < channels.size(); ++l) {
                int os = channels[l]->output_size();
                int y = rem % os;
                rem /= os;
                w *= channels[l]->prob(y, x);
                flat = flat * os + y;
            }
            probs[flat] += w;
        }
    }
    return JointPmf(std::move(names), std::move(cards), std::move(probs));
}

PairwiseJoint effective_channel(const AuxModel& model, int observed_var,
                                std::span<const int> conditioned_vars,
                                const Channel* channel) {
    int nv = model.num_vars();
    if (observed_var < 0 || observed_var >= nv)
        throw model_error("effective_channel: bad observed variable index");
    for (int c : conditioned_vars) {
        if (c < 0 || c >= nv || c == observed_var)
            throw model_error("effective_channel: bad conditioned variable index");
    }
    int side_size = 1 << conditioned_vars.size();
    int out_size = channel ? channel->output_size() : 1;
    std::vector<double> table(2 * side_size * out_size, 0.0);
    std::vector<int> vals(nv);
    for (int a = 0; a < (1 << nv); ++a) {
        double pa = model.joint(a);
        if (pa == 0.0) continue;
        for (int j = 0; j < nv; ++j) vals[j] = (a >> (nv - 1 - j)) & 1;
        int t = vals[observed_var];
        int packed = 0;
        for (int c : conditioned_vars) packed = (packed << 1) | vals[c];
        if (channel) {
            int x = model.channel_input(vals);
            for (int y = 0; y < out_size; ++y) {
                double w = pa * channel->prob(y, x);
                table[(t * side_size + packed) * out_size + y] += w;
            }
        } else {
            table[t * side_size + packed] += pa;
        }
    }
    return PairwiseJoint(side_size * out_size, std::move(table));
}

namespace {

// Phase-1 simplex (Bland's rule) for feasibility of A x = b, x >= 0.
// Returns the optimal sum of artificial variables.
double phase1_infeasibility(std::vector<std::vector<double>> a,
                            std::vector<double> b) {
    const int m = static_cast<int>(b.size());
    const int n = m > 0 ? static_cast<int>(a[0].size()) : 0;
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            b[i] = -b[i];
            for (double& v : a[i]) v = -v;
        }
    }
    // Tableau columns: n originals + m artificials + rhs.
    const int cols = n + m;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1.0;
        t[i][cols] = b[i];
        basis[i] = n + i;
    }
    // Objective row: minimize sum of artificials; express in terms of nonbasics.
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= cols; ++j)
            if (j < n || j == cols) t[m][j] -= t[i][j];

    const double eps = 1e-12;
    for (;;) {
        int pivot_col = -1;
        for (int j = 0; j < cols; ++j) {
            if (t[m][j] < -eps) { pivot_col = j; break; }  // Bland: lowest index
        }
        if (pivot_col < 0) break;
        int pivot_row = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (t[i][pivot_col] > eps) {
                double ratio = t[i][cols] / t[i][pivot_col];
                if (pivot_row < 0 || ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && basis[i] < basis[pivot_row])) {
                    pivot_row = i;
                    best_ratio = ratio;
                }
            }
        }
        if (pivot_row < 0) break;  // unbounded cannot happen in phase 1
        double piv = t[pivot_row][pivot_col];
        for (int j = 0; j <= cols; ++j) t[pivot_row][j] /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == pivot_row) continue;
            double f = t[i][pivot_col];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[pivot_row][j];
        }
        basis[pivot_row] = pivot_col;
    }
    return -t[m][cols];  // objective row holds -(current objective value)
}

}  // namespace

bool check_stochastic_degradation(const Channel& p, const Channel& q,
                                  double tol) {
    if (p.input_size() != q.input_size())
        throw model_error("check_stochastic_degradation: input alphabets differ");
    const int xin = p.input_size();
    const int yp = p.output_size();
    const int yq = q.output_size();
    // Unknowns M(y, y') >= 0, row-major flat index y * yq + y'.
    const int nvars = yp * yq;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int x = 0; x < xin; ++x) {
        for (int y2 = 0; y2 < yq; ++y2) {
            std::vector<double> row(nvars, 0.0);
            for (int y = 0; y < yp; ++y) row[y * yq + y2] = p.prob(y, x);
            a.push_back(std::move(row));
            b.push_back(q.prob(y2, x));
        }
    }
    for (int y = 0; y < yp; ++y) {
        std::vector<double> row(nvars, 0.0);
        for (int y2 = 0; y2 < yq; ++y2) row[y * yq + y2] = 1.0;
        a.push_back(std::move(row));
        b.push_back(1.0);
    }
    return phase1_infeasibility(std::move(a), std::move(b)) <= tol;
}

}  // namespace marton
