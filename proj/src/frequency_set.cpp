#include "mulab/frequency_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mulab/util.hpp"

namespace mulab::freq {

FrequencySet FrequencySet::finite(std::vector<double> points) {
    if (points.empty()) throw std::invalid_argument("FrequencySet::finite: empty set");
    for (double p : points)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("FrequencySet::finite: points must lie in [0,1]");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    FrequencySet s;
    s.kind_ = Kind::finite;
    s.points_ = std::move(points);
    return s;
}

FrequencySet FrequencySet::cantor(double ratio, int level) {
    if (!(ratio > 0.0 && ratio < 0.5))
        throw std::invalid_argument("FrequencySet::cantor: ratio in (0, 1/2) required");
    if (level < 0 || level > 40)
        throw std::invalid_argument("FrequencySet::cantor: level in [0, 40] required");
    FrequencySet s;
    s.kind_ = Kind::cantor;
    s.ratio_ = ratio;
    s.level_ = level;
    return s;
}

FrequencySet FrequencySet::grid(double step) {
    if (!(step > 0.0 && step <= 1.0))
        throw std::invalid_argument("FrequencySet::grid: step in (0,1] required");
    FrequencySet s;
    s.kind_ = Kind::grid;
    s.step_ = step;
    return s;
}

std::vector<Interval> FrequencySet::intervals() const {
    std::vector<Interval> out;
    switch (kind_) {
        case Kind::finite:
            for (double p : points_) out.push_back({p, p});
            break;
        case Kind::grid:
            for (double x = 0.0; x <= 1.0 + 1e-12; x += step_) {
                double p = std::min(x, 1.0);
                out.push_back({p, p});
                if (p >= 1.0) break;
            }
            break;
        case Kind::cantor: {
            out.push_back({0.0, 1.0});
            for (int l = 0; l < level_; ++l) {
                std::vector<Interval> next;
                next.reserve(out.size() * 2);
                for (const auto& iv : out) {
                    double len = (iv.b - iv.a) * ratio_;
                    next.push_back({iv.a, iv.a + len});
                    next.push_back({iv.b - len, iv.b});
                }
                out = std::move(next);
            }
            break;
        }
    }
    return out;
}

FrequencySet::Refinement FrequencySet::refine(double eta) const {
    if (!(eta > 0.0)) throw std::invalid_argument("FrequencySet::refine: eta > 0 required");
    Refinement r;
    if (kind_ == Kind::finite) {
        r.points = points_;
        r.max_gap = 0.0;
        return r;
    }
    if (kind_ == Kind::grid) {
        for (const auto& iv : intervals()) r.points.push_back(iv.a);
        r.max_gap = 0.0;
        return r;
    }
    double worst = 0.0;
    for (const auto& iv : intervals()) {
        double len = iv.b - iv.a;
        if (len <= eta) {
            // endpoints bracket the interval within half its length
            r.points.push_back(iv.a);
            r.points.push_back(iv.b);
            worst = std::max(worst, len / 2.0);
        } else {
            auto k = std::size_t(std::ceil(len / eta));
            for (std::size_t i = 0; i <= k; ++i)
                r.points.push_back(iv.a + len * double(i) / double(k));
            worst = std::max(worst, len / double(k) / 2.0);
        }
    }
    std::sort(r.points.begin(), r.points.end());
    r.points.erase(std::unique(r.points.begin(), r.points.end()), r.points.end());
    r.max_gap = worst;
    return r;
}

double FrequencySet::distance_to(double theta) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : intervals()) {
        if (theta < iv.a)
            best = std::min(best, iv.a - theta);
        else if (theta > iv.b)
            best = std::min(best, theta - iv.b);
        else
            return 0.0;
    }
    return best;
}

double FrequencySet::analytic_dimension() const {
    switch (kind_) {
        case Kind::finite: return 0.0;
        case Kind::grid: return 1.0;
        case Kind::cantor: return std::log(2.0) / std::log(1.0 / ratio_);
    }
    return 0.0;
}

double FrequencySet::sample(std::uint64_t& rng_state) const {
    auto u01 = [&rng_state]() {
        return double(splitmix64(rng_state) >> 11) * 0x1.0p-53;
    };
    switch (kind_) {
        case Kind::finite: {
            std::size_t i = std::size_t(splitmix64(rng_state) % points_.size());
            return points_[i];
        }
        case Kind::grid: {
            auto n = std::uint64_t(std::floor(1.0 / step_)) + 1;
            return std::min(1.0, step_ * double(splitmix64(rng_state) % n));
        }
        case Kind::cantor: {
            double a = 0.0, len = 1.0;
            for (int l = 0; l < level_; ++l) {
                bool right = (splitmix64(rng_state) & 1u) != 0;
                len *= ratio_;
                if (right) a += (1.0 - ratio_) * (len / ratio_);
            }
            return a + len * u01();
        }
    }
    return 0.0;
}

std::string FrequencySet::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::finite: {
            os << "finite:";
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i) os << ';';
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", points_[i]);
                os << buf;
            }
            break;
        }
        case Kind::cantor: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "cantor:%.17g:%d", ratio_, level_);
            os << buf;
            break;
        }
        case Kind::grid: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "grid:%.17g", step_);
            os << buf;
            break;
        }
    }
    return os.str();
}

FrequencySet FrequencySet::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("FrequencySet::parse: expected kind:args, got " + text);
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "finite") {
        std::vector<double> pts;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ';'))
            if (!tok.empty()) pts.push_back(std::stod(tok));
        return finite(std::move(pts));
    }
    if (kind == "cantor") {
        auto c2 = rest.find(':');
        if (c2 == std::string::npos)
            throw std::invalid_argument("FrequencySet::parse: cantor needs ratio:level");
        return cantor(std::stod(rest.substr(0, c2)), std::stoi(rest.substr(c2 + 1)));
    }
    if (kind == "grid") return grid(std::stod(rest));
    throw std::invalid_argument("FrequencySet::parse: unknown kind " + kind);
}

}  // namespace mulab::freq
