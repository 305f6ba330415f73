#include "circleot/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace circleot {

void fft_inplace(std::vector<double>& re, std::vector<double>& im, bool inverse) {
    const std::size_t n = re.size();
    if (n == 0 || (n & (n - 1)) != 0 || im.size() != n)
        throw std::domain_error("fft_inplace: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const double wr = std::cos(ang), wi = std::sin(ang);
        for (std::size_t i = 0; i < n; i += len) {
            double cr = 1.0, ci = 0.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::size_t a = i + j, b = i + j + len / 2;
                const double tr = re[b] * cr - im[b] * ci;
                const double ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                const double ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            re[i] *= inv;
            im[i] *= inv;
        }
    }
}

double TrigPoly::eval(double x) const {
    double s = a0;
    const std::size_t k_ca = ca.size(), k_sb = sb.size();
    const std::size_t K = std::max(k_ca, k_sb);
    for (std::size_t k = 1; k <= K; ++k) {
        const double c = (k <= k_ca) ? ca[k - 1] : 0.0;
        const double b = (k <= k_sb) ? sb[k - 1] : 0.0;
        if (c == 0.0 && b == 0.0) continue;
        const double ph = kTwoPi * static_cast<double>(k) * x;
        s += c * std::cos(ph) + b * std::sin(ph);
    }
    return s;
}

double TrigPoly::derivative_eval(double x) const {
    double s = 0.0;
    const std::size_t k_ca = ca.size(), k_sb = sb.size();
    const std::size_t K = std::max(k_ca, k_sb);
    for (std::size_t k = 1; k <= K; ++k) {
        const double c = (k <= k_ca) ? ca[k - 1] : 0.0;
        const double b = (k <= k_sb) ? sb[k - 1] : 0.0;
        if (c == 0.0 && b == 0.0) continue;
        const double w = kTwoPi * static_cast<double>(k);
        const double ph = w * x;
        s += w * (b * std::cos(ph) - c * std::sin(ph));
    }
    return s;
}

double TrigPoly::l2_norm() const {
    double s = a0 * a0;
    for (double c : ca) s += 0.5 * c * c;
    for (double b : sb) s += 0.5 * b * b;
    return std::sqrt(s);
}

std::vector<double> TrigPoly::sample(int N) const {
    std::vector<double> out(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) out[static_cast<std::size_t>(i)] = eval(static_cast<double>(i) / N);
    return out;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    a0 += o.a0;
    if (o.ca.size() > ca.size()) ca.resize(o.ca.size(), 0.0);
    if (o.sb.size() > sb.size()) sb.resize(o.sb.size(), 0.0);
    for (std::size_t i = 0; i < o.ca.size(); ++i) ca[i] += o.ca[i];
    for (std::size_t i = 0; i < o.sb.size(); ++i) sb[i] += o.sb[i];
    return *this;
}

TrigPoly TrigPoly::scaled(double c) const {
    TrigPoly out = *this;
    out.a0 *= c;
    for (double& v : out.ca) v *= c;
    for (double& v : out.sb) v *= c;
    return out;
}

void TrigPoly::trim(double tol) {
    for (double& v : ca)
        if (std::fabs(v) < tol) v = 0.0;
    for (double& v : sb)
        if (std::fabs(v) < tol) v = 0.0;
    auto last_nonzero = [](const std::vector<double>& v) {
        std::size_t n = v.size();
        while (n > 0 && v[n - 1] == 0.0) --n;
        return n;
    };
    ca.resize(last_nonzero(ca));
    sb.resize(last_nonzero(sb));
}

TrigPoly TrigPoly::constant(double c) {
    TrigPoly p;
    p.a0 = c;
    return p;
}

TrigPoly TrigPoly::cosine(int k, double amp) {
    if (k < 1) throw std::domain_error("TrigPoly::cosine: frequency must be >= 1");
    TrigPoly p;
    p.ca.assign(static_cast<std::size_t>(k), 0.0);
    p.ca.back() = amp;
    return p;
}

TrigPoly TrigPoly::sine(int k, double amp) {
    if (k < 1) throw std::domain_error("TrigPoly::sine: frequency must be >= 1");
    TrigPoly p;
    p.sb.assign(static_cast<std::size_t>(k), 0.0);
    p.sb.back() = amp;
    return p;
}

TrigPoly fit_trig(const std::vector<double>& samples, double drop_tol) {
    const std::size_t n = samples.size();
    if (n < 4 || (n & (n - 1)) != 0)
        throw std::domain_error("fit_trig: need a power-of-two sample count >= 4");
    std::vector<double> re = samples, im(n, 0.0);
    fft_inplace(re, im, false);
    TrigPoly p;
    p.a0 = re[0] / static_cast<double>(n);
    const std::size_t K = n / 2 - 1;  // the Nyquist bin is not representable as cos+sin
    p.ca.resize(K);
    p.sb.resize(K);
    for (std::size_t k = 1; k <= K; ++k) {
        p.ca[k - 1] = 2.0 * re[k] / static_cast<double>(n);
        p.sb[k - 1] = -2.0 * im[k] / static_cast<double>(n);
    }
    if (drop_tol > 0.0) {
        double m = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            m = std::max(m, std::max(std::fabs(p.ca[k]), std::fabs(p.sb[k])));
        p.trim(drop_tol * std::max(m, std::fabs(p.a0)));
    }
    return p;
}

TrigPoly fit_trig(const Eigen::ArrayXd& samples, double drop_tol) {
    std::vector<double> s(samples.data(), samples.data() + samples.size());
    return fit_trig(s, drop_tol);
}

void TangentField::validate() const {
    if (samples.size() < 2) throw std::domain_error("TangentField: need >= 2 samples");
    if (trig) {
        const int N = n();
        double worst = 0.0;
        for (int i = 0; i < N; ++i)
            worst = std::max(worst, std::fabs(trig->eval(static_cast<double>(i) / N) - samples[i]));
        if (worst > 1e-10)
            throw std::domain_error("TangentField: grid samples disagree with trig synthesis");
    }
}

TangentField TangentField::from_trig(const TrigPoly& p, int N) {
    if (N < 2) throw std::domain_error("TangentField::from_trig: N must be >= 2");
    if (p.max_freq() > N / 2 - 1)
        throw std::domain_error("TangentField::from_trig: frequencies exceed the grid Nyquist limit");
    TangentField f;
    f.samples.resize(N);
    for (int i = 0; i < N; ++i) f.samples[i] = p.eval(static_cast<double>(i) / N);
    f.trig = p;
    f.lambda_mean = f.samples.mean();
    return f;
}

TangentField TangentField::from_samples(Eigen::ArrayXd s) {
    if (s.size() < 2) throw std::domain_error("TangentField::from_samples: need >= 2 samples");
    TangentField f;
    f.samples = std::move(s);
    f.lambda_mean = f.samples.mean();
    return f;
}

TangentField TangentField::from_samples(const std::vector<double>& s) {
    Eigen::ArrayXd a = Eigen::Map<const Eigen::ArrayXd>(s.data(), static_cast<Eigen::Index>(s.size()));
    return from_samples(std::move(a));
}

TangentField TangentField::zero(int N) {
    TangentField f;
    f.samples = Eigen::ArrayXd::Zero(N);
    f.trig = TrigPoly{};
    f.lambda_mean = 0.0;
    return f;
}

TangentField linear_combination(const std::vector<double>& c, const std::vector<TangentField>& vs) {
    if (c.size() != vs.size() || vs.empty())
        throw std::domain_error("linear_combination: coefficient/field count mismatch");
    const int N = vs.front().n();
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(N);
    bool all_trig = true;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].n() != N) throw std::domain_error("linear_combination: mixed grid sizes");
        acc += c[i] * vs[i].samples;
        all_trig = all_trig && vs[i].trig.has_value();
    }
    TangentField out = TangentField::from_samples(std::move(acc));
    if (all_trig) {
        TrigPoly p;
        for (std::size_t i = 0; i < vs.size(); ++i) p += vs[i].trig->scaled(c[i]);
        out.trig = p;
    }
    return out;
}

void PiecewiseLinearField::validate() const {
    if (pieces.empty()) throw std::domain_error("PiecewiseLinearField: empty");
    if (pieces.front().x0 != 0.0) throw std::domain_error("PiecewiseLinearField: must start at 0");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].x0 < pieces[i].x1))
            throw std::domain_error("PiecewiseLinearField: empty piece");
        if (i + 1 < pieces.size() && pieces[i].x1 != pieces[i + 1].x0)
            throw std::domain_error("PiecewiseLinearField: pieces must be consecutive");
    }
    if (pieces.back().x1 != 1.0) throw std::domain_error("PiecewiseLinearField: must end at 1");
}

double PiecewiseLinearField::eval(double x) const {
    x = wrap01(x);
    // binary search for the piece with x0 <= x < x1
    std::size_t lo = 0, hi = pieces.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (pieces[mid].x0 <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    const Piece& p = pieces[lo];
    return p.v0 + p.slope * (x - p.x0);
}

double PiecewiseLinearField::l2_norm_sq() const {
    double acc = 0.0;
    for (const Piece& p : pieces) {
        const double w = p.x1 - p.x0;
        const double v1 = p.v0 + p.slope * w;
        // integral of (v0 + s u)^2 du over [0, w] = (v1^3 - v0^3) / (3 s), or w v0^2 for s = 0
        if (p.slope == 0.0)
            acc += w * p.v0 * p.v0;
        else
            acc += (v1 * v1 * v1 - p.v0 * p.v0 * p.v0) / (3.0 * p.slope);
    }
    return acc;
}

double PiecewiseLinearField::mean() const {
    double acc = 0.0;
    for (const Piece& p : pieces) {
        const double w = p.x1 - p.x0;
        acc += w * (p.v0 + 0.5 * p.slope * w);
    }
    return acc;
}

TrigPoly PiecewiseLinearField::fourier(int K) const {
    // Exact projection of each linear piece:
    //   integral of (v0 + s (x - x0)) cos(w x) dx
    //     = [f(x) sin(w x)]/w  + (s/w^2) [cos(w x)]   over [x0, x1]
    //   integral of (v0 + s (x - x0)) sin(w x) dx
    //     = -[f(x) cos(w x)]/w + (s/w^2) [sin(w x)]   over [x0, x1]
    TrigPoly p;
    p.a0 = mean();
    p.ca.assign(static_cast<std::size_t>(K), 0.0);
    p.sb.assign(static_cast<std::size_t>(K), 0.0);
    for (int k = 1; k <= K; ++k) {
        const double w = kTwoPi * k;
        double ak = 0.0, bk = 0.0;
        for (const Piece& q : pieces) {
            const double f0 = q.v0;
            const double f1 = q.v0 + q.slope * (q.x1 - q.x0);
            const double s0 = std::sin(w * q.x0), s1 = std::sin(w * q.x1);
            const double c0 = std::cos(w * q.x0), c1 = std::cos(w * q.x1);
            ak += (f1 * s1 - f0 * s0) / w + q.slope * (c1 - c0) / (w * w);
            bk += (f0 * c0 - f1 * c1) / w + q.slope * (s1 - s0) / (w * w);
        }
        p.ca[static_cast<std::size_t>(k - 1)] = 2.0 * ak;
        p.sb[static_cast<std::size_t>(k - 1)] = 2.0 * bk;
    }
    return p;
}

TangentField PiecewiseLinearField::to_tangent_field(int N) const {
    Eigen::ArrayXd s(N);
    for (int i = 0; i < N; ++i) s[i] = eval(static_cast<double>(i) / N);
    return TangentField::from_samples(std::move(s));
}

PiecewiseLinearField sawtooth_field(int k) {
    if (k < 2) throw std::domain_error("sawtooth_field: k must be >= 2");
    PiecewiseLinearField f;
    const double amp = 1.0 / (4.0 * k);
    const int m = 2 * k;
    f.pieces.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        PiecewiseLinearField::Piece p;
        p.x0 = static_cast<double>(i) / m;
        p.x1 = static_cast<double>(i + 1) / m;
        if (i < k) {
            p.v0 = amp;
            p.slope = -1.0;
        } else {
            p.v0 = -amp;
            p.slope = 1.0;
        }
        f.pieces.push_back(p);
    }
    f.validate();
    return f;
}

}  // namespace circleot
