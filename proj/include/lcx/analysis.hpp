// SPDX-License-Identifier: Apache-2.0
//
// lcxpin: simulation and optimization toolkit for leaky-coaxial-cable
// pinching-antenna downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LCX_ANALYSIS_HPP
#define LCX_ANALYSIS_HPP

#include "scenario.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

/*
 * Closed-form single-slot rate laws and numerical checkers for the comparison
 * against a fixed antenna at the region centre. Every checker returns both sides
 * of its inequality so callers can look at margins, not just verdicts.
 */

namespace lcx::analysis
{
    struct GeometrySummary
    {
        double D = 0.0;       // min(dx, dy)
        double height = 0.0;  // d
        double delta_x = 0.0; // slot spacing
        double delta_y = 0.0; // cable spacing dy / K

        double a() const { return D / (2.0 * height); }
        double b2() const { return (delta_x * delta_x + delta_y * delta_y) / (4.0 * height * height); }
    };

    inline GeometrySummary summarize(const ScenarioConfig &c)
    {
        return {std::min(c.dx, c.dy), c.height, c.slot_spacing(), c.dy / static_cast<double>(c.cables)};
    }

    /// Single user, single slot, LoS only, no cable loss: P*eta^2*d^2 / (sigma^2 r^4).
    inline double rate_lcx_single(double p_mw, double d, double r, const PhysConstants &ph)
    {
        const double eta = ph.eta();
        return std::log2(1.0 + p_mw * eta * eta * d * d / (ph.sigma2_mw * std::pow(r, 4)));
    }

    /// Free-space fixed antenna: P*eta^2 / (sigma^2 dist^2).
    inline double rate_fixed(double p_mw, double dist, const PhysConstants &ph)
    {
        const double eta = ph.eta();
        return std::log2(1.0 + p_mw * eta * eta / (ph.sigma2_mw * dist * dist));
    }

    /// f(a) = log2(1+a^2) + log2(1+a^2)/a^2; nondecreasing in a.
    inline double f_gain(double a)
    {
        const double l = std::log2(1.0 + a * a);
        return l + l / (a * a);
    }

    struct DominanceCheck
    {
        bool holds = false;
        double log_lhs = 0.0; // ln of (1+a^2)^(1+1/a^2)
        double log_rhs = 0.0; // ln of e (1+b^2)^2
    };

    /// Sufficient condition for the worst-cell LCX rate to beat the mean fixed-antenna
    /// rate at high SNR, evaluated in the log domain.
    inline DominanceCheck dominance_condition(const GeometrySummary &g)
    {
        const double a2 = g.a() * g.a();
        DominanceCheck c;
        c.log_lhs = (1.0 + 1.0 / a2) * std::log1p(a2);
        c.log_rhs = 1.0 + 2.0 * std::log1p(g.b2());
        c.holds = c.log_lhs >= c.log_rhs;
        return c;
    }

    struct SinModelCheck
    {
        bool holds = false;
        double lhs_sin2 = 0.0; // sin^2 of the serving elevation angle
        double rhs = 0.0;      // (gamma + sin^2 phi') / (1 + gamma)
        double gamma = 0.0;
        bool high_snr_holds = false; // serving slot no farther than the interfering one
    };

    /// Single-slot LCX link (k, m) to user n against interference from (kp, mp): does
    /// the sin-weighted LCX model give a rate no lower than the conventional pinching
    /// model? Both models see the same per-user power p_mw and cable losses.
    inline SinModelCheck sin_model_condition(const Scenario &sc, std::size_t k, std::size_t m, std::size_t kp,
                                      std::size_t mp, std::size_t n, double p_mw)
    {
        const auto &ph = sc.phys();
        const Vec3 &u = sc.user(n);
        const double r = (u - sc.slot(k, m)).norm();
        const double rp = (u - sc.slot(kp, mp)).norm();
        const double s2 = std::pow(elevation_sine(sc.slot(k, m), u), 2);
        const double s2p = std::pow(elevation_sine(sc.slot(kp, mp), u), 2);
        const double eta = ph.eta();

        SinModelCheck c;
        c.gamma = ph.sigma2_mw / (p_mw * eta * eta) * rp * rp *
                  std::pow(10.0, ph.kappa_db_per_m / 10.0 * sc.cable_distance(kp, mp));
        c.lhs_sin2 = s2;
        c.rhs = (c.gamma + s2p) / (1.0 + c.gamma);
        c.holds = c.lhs_sin2 >= c.rhs;
        c.high_snr_holds = r <= rp;
        return c;
    }

    /// Received-power shape d^2 / (rho^2 + d^2)^2 at horizontal offset rho.
    inline double local_gain(double rho, double d)
    {
        const double q = rho * rho + d * d;
        return d * d / (q * q);
    }

    /// Worst-cell LCX rate: the user at the corner of its slot cell.
    inline double worst_cell_lcx_rate(const GeometrySummary &g, double p_mw, const PhysConstants &ph)
    {
        const double d = g.height;
        const double q = g.delta_x * g.delta_x / 4.0 + g.delta_y * g.delta_y / 4.0 + d * d;
        const double eta = ph.eta();
        return std::log2(1.0 + p_mw * eta * eta * d * d / (ph.sigma2_mw * q * q));
    }

    struct GapBound
    {
        double bits = 0.0;
        bool high_snr = false; // false: the high-SNR approximations behind the bound are doubtful
    };

    /// High-SNR lower bound on (worst-cell LCX rate) - (mean fixed-antenna rate).
    inline GapBound gap_lower_bound(const GeometrySummary &g, const PhysConstants &ph, double p_mw,
                                       double snr_threshold_db = 30.0)
    {
        const double a2 = g.a() * g.a();
        GapBound out;
        out.bits = std::log2(1.0 + a2) - 2.0 * std::log2(1.0 + g.b2()) - std::log2(std::numbers::e) +
                   std::log2(1.0 + a2) / a2;
        const double eta = ph.eta();
        out.high_snr = 10.0 * std::log10(p_mw * eta * eta / ph.sigma2_mw) >= snr_threshold_db;
        return out;
    }

    /// Upper bound on the mean fixed-antenna rate: users uniform on the disc of
    /// radius D/2 around the antenna, integrated by Gauss-Kronrod quadrature.
    inline double fixed_rate_disc_bound(const GeometrySummary &g, double p_mw, const PhysConstants &ph)
    {
        const double snr0 = p_mw * ph.eta() * ph.eta() / ph.sigma2_mw;
        const double d2 = g.height * g.height;
        auto integrand = [&](double r) { return std::log2(1.0 + snr0 / (r * r + d2)) * r; };
        const double R = g.D / 2.0;
        const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 15, 1e-12);
        return 8.0 / (g.D * g.D) * I;
    }

    /// Exact mean fixed-antenna rate over a dx x dy rectangle centred under the antenna.
    inline double fixed_rate_rect_mean(double dx, double dy, double height, double p_mw, const PhysConstants &ph)
    {
        using boost::math::quadrature::gauss_kronrod;
        const double snr0 = p_mw * ph.eta() * ph.eta() / ph.sigma2_mw;
        const double d2 = height * height;
        auto inner = [&](double x) {
            auto f = [&](double y) { return std::log2(1.0 + snr0 / (x * x + y * y + d2)); };
            return gauss_kronrod<double, 61>::integrate(f, -dy / 2.0, dy / 2.0, 10, 1e-11);
        };
        return gauss_kronrod<double, 61>::integrate(inner, -dx / 2.0, dx / 2.0, 10, 1e-11) / (dx * dy);
    }
}

#endif
