#include "glgp/rset.hpp"

#include "glgp/errors.hpp"

#include <limits>

namespace glgp {

namespace {

void check_sorted_distinct(const RSet& s) {
    for (int i = 1; i < s.size(); ++i)
        if (s[i - 1] == s[i]) throw InvalidParams("r-set has a repeated vertex");
}

} // namespace

RSet::RSet(std::initializer_list<Vertex> vs) : RSet(std::span<const Vertex>(vs.begin(), vs.size())) {}

RSet::RSet(std::span<const Vertex> vs) {
    if (vs.size() > kMaxUniformity) throw InvalidParams("set larger than the supported uniformity");
    size_ = static_cast<std::uint8_t>(vs.size());
    std::copy(vs.begin(), vs.end(), v_.begin());
    std::sort(v_.begin(), v_.begin() + size_);
    check_sorted_distinct(*this);
}

RSet RSet::make(std::span<const Vertex> vs, std::size_t n) {
    RSet s(vs);
    if (s.size_ > 0 && s.v_[s.size_ - 1] >= n) throw InvalidParams("vertex out of range");
    return s;
}

bool RSet::contains(Vertex x) const {
    for (int i = 0; i < size_; ++i)
        if (v_[i] == x) return true;
    return false;
}

int RSet::intersection_size(const RSet& o) const {
    int i = 0, j = 0, c = 0;
    while (i < size_ && j < o.size_) {
        if (v_[i] == o.v_[j]) {
            ++c;
            ++i;
            ++j;
        } else if (v_[i] < o.v_[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return c;
}

RSet RSet::without(Vertex x) const {
    RSet out;
    for (int i = 0; i < size_; ++i)
        if (v_[i] != x) out.v_[out.size_++] = v_[i];
    return out;
}

RSet RSet::with(Vertex x) const {
    if (contains(x)) return *this;
    if (size_ == kMaxUniformity) throw InvalidParams("set larger than the supported uniformity");
    RSet out = *this;
    out.v_[out.size_++] = x;
    std::sort(out.v_.begin(), out.v_.begin() + out.size_);
    return out;
}

std::string RSet::str() const {
    std::string s;
    for (int i = 0; i < size_; ++i) {
        if (i) s += ' ';
        s += std::to_string(v_[i]);
    }
    return s;
}

std::size_t RSetHash::operator()(const RSet& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(s.size());
    for (Vertex v : s) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

double falling_factorial(double n, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= (n - i);
    return acc;
}

Colex::Colex(std::size_t n, int r) : n_(n), r_(r) {
    if (r < 1 || r > kMaxUniformity) throw InvalidParams("uniformity out of supported range");
    table_.assign((n + 1) * static_cast<std::size_t>(r + 1), 0);
    for (std::size_t a = 0; a <= n; ++a)
        for (int b = 0; b <= r; ++b) table_[a * (r + 1) + b] = binomial(a, static_cast<std::uint64_t>(b));
    total_ = binomial(n, static_cast<std::uint64_t>(r));
}

std::uint64_t Colex::rank(const RSet& s) const {
    std::uint64_t rk = 0;
    for (int j = 0; j < r_; ++j) rk += c(s[j], j + 1);
    return rk;
}

RSet Colex::unrank(std::uint64_t rank) const {
    std::array<Vertex, kMaxUniformity> out{};
    std::size_t hi = n_;
    for (int j = r_; j >= 1; --j) {
        // largest x < hi with C(x, j) <= rank
        std::size_t lo = static_cast<std::size_t>(j - 1), top = hi - 1;
        while (lo < top) {
            std::size_t mid = (lo + top + 1) / 2;
            if (c(mid, j) <= rank)
                lo = mid;
            else
                top = mid - 1;
        }
        out[static_cast<std::size_t>(j - 1)] = static_cast<Vertex>(lo);
        rank -= c(lo, j);
        hi = lo;
    }
    return RSet(std::span<const Vertex>(out.data(), static_cast<std::size_t>(r_)));
}

RSetPool::RSetPool(std::size_t n, int r) : colex_(n, r) {
    if (colex_.total() >= kAbsent) throw InvalidParams("too many r-sets for the dense pool");
    pos_.assign(colex_.total(), kAbsent);
}

void RSetPool::insert(const RSet& s) {
    const std::uint64_t rk = colex_.rank(s);
    if (pos_[rk] != kAbsent) return;
    pos_[rk] = static_cast<std::uint32_t>(dense_.size());
    dense_.push_back(static_cast<std::uint32_t>(rk));
}

void RSetPool::fill_all() {
    dense_.resize(colex_.total());
    for (std::uint32_t k = 0; k < dense_.size(); ++k) {
        dense_[k] = k;
        pos_[k] = k;
    }
}

bool RSetPool::erase(const RSet& s) { return erase_rank(colex_.rank(s)); }

bool RSetPool::erase_rank(std::uint64_t rk) {
    const std::uint32_t p = pos_[rk];
    if (p == kAbsent) return false;
    const std::uint32_t last = dense_.back();
    dense_[p] = last;
    pos_[last] = p;
    dense_.pop_back();
    pos_[rk] = kAbsent;
    return true;
}

std::vector<RSet> RSetPool::sorted() const {
    std::vector<RSet> out;
    out.reserve(dense_.size());
    for (std::uint32_t rk : dense_) out.push_back(colex_.unrank(rk));
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_subset(const RSet& s, int k, const std::function<void(const RSet&)>& fn) {
    const int n = s.size();
    if (k < 0 || k > n) return;
    std::array<int, kMaxUniformity> idx{};
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::array<Vertex, kMaxUniformity> buf{};
    while (true) {
        for (int i = 0; i < k; ++i) buf[i] = s[idx[i]];
        fn(RSet(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(k))));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

void for_each_kset(std::size_t n, int k, const std::function<void(const RSet&)>& fn) {
    if (k < 0 || static_cast<std::size_t>(k) > n || k > kMaxUniformity) return;
    std::array<Vertex, kMaxUniformity> idx{};
    for (int i = 0; i < k; ++i) idx[i] = static_cast<Vertex>(i);
    while (true) {
        fn(RSet(std::span<const Vertex>(idx.data(), static_cast<std::size_t>(k))));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - static_cast<std::size_t>(k) + static_cast<std::size_t>(i)) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace glgp
