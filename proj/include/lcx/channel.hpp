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

#ifndef LCX_CHANNEL_HPP
#define LCX_CHANNEL_HPP

#include "scenario.hpp"

#include <cstdint>
#include <ostream>

// Two-stage propagation: guided transmission from the feed to slot m inside the
// cable, followed by radiation from the slot (a small magnetic loop with a
// sin(elevation) pattern) to the user, directly and via wall scatterers.

namespace lcx
{
    struct ChannelFlags
    {
        bool include_nlos = true;
        bool include_cable_attenuation = true;
    };

    /// Guided channel from the feed of cable k to its slot m. With attenuation
    /// disabled only the guided phase is kept.
    inline cplx cable_channel(std::size_t k, std::size_t m, const Scenario &sc, bool attenuation = true)
    {
        const auto &ph = sc.phys();
        const double dist = sc.cable_distance(k, m);
        const double mag = attenuation ? std::pow(10.0, -ph.kappa_db_per_m * dist / 20.0) : 1.0;
        return std::polar(mag, -ph.wavenumber() * std::sqrt(ph.eps_r) * dist);
    }

    /// Direct radiated channel from slot (k, m) to user n.
    inline cplx radiated_los(std::size_t k, std::size_t m, std::size_t n, const Scenario &sc)
    {
        const auto &ph = sc.phys();
        const Vec3 s = sc.slot(k, m);
        const double r = (sc.user(n) - s).norm();
        const double sin_phi = elevation_sine(s, sc.user(n));
        return std::polar(ph.eta() * sin_phi / r, -ph.wavenumber() * r);
    }

    /// Sum over scatterers of the slot -> scatterer -> user paths. The slot pattern
    /// is evaluated at the depression angle towards the scatterer.
    inline cplx scattered_channel(std::size_t k, std::size_t m, std::size_t n, const Scenario &sc)
    {
        const auto &ph = sc.phys();
        const Vec3 s = sc.slot(k, m);
        const Vec3 &u = sc.user(n);
        cplx acc{0.0, 0.0};
        for (const auto &sct : sc.scatterers())
        {
            const double r1 = (sct.position - s).norm();
            const double r2 = (u - sct.position).norm();
            const double sin_phi = elevation_sine(s, sct.position);
            acc += sct.gain * std::polar(sin_phi / (r1 * r2), -ph.wavenumber() * (r1 + r2));
        }
        return ph.eta() * acc;
    }

    /// Per-slot complex gains of one channel realization, indexed (k, m, n).
    struct ChannelSet
    {
        Array3<cplx> los;
        Array3<cplx> nlos;
        Array3<cplx> total;
        ChannelFlags flags;

        std::size_t cables() const { return total.dim0(); }
        std::size_t slots() const { return total.dim1(); }
        std::size_t users() const { return total.dim2(); }
        const cplx &operator()(std::size_t k, std::size_t m, std::size_t n) const { return total(k, m, n); }
    };

    inline ChannelSet compose_channels(const Scenario &sc, ChannelFlags flags = {})
    {
        const std::size_t K = sc.cables(), M = sc.slots(), N = sc.users();
        ChannelSet cs{Array3<cplx>(K, M, N), Array3<cplx>(K, M, N), Array3<cplx>(K, M, N), flags};
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t m = 0; m < M; ++m)
            {
                const cplx guided = cable_channel(k, m, sc, flags.include_cable_attenuation);
                for (std::size_t n = 0; n < N; ++n)
                {
                    cs.los(k, m, n) = guided * radiated_los(k, m, n, sc);
                    if (flags.include_nlos)
                        cs.nlos(k, m, n) = guided * scattered_channel(k, m, n, sc);
                    cs.total(k, m, n) = cs.los(k, m, n) + cs.nlos(k, m, n);
                }
            }
        return cs;
    }

    /// Superposition of the active slots of cable k towards user n.
    inline cplx effective_channel(const ChannelSet &cs, const Array2<std::uint8_t> &beta, std::size_t k,
                                  std::size_t n)
    {
        cplx h{0.0, 0.0};
        for (std::size_t m = 0; m < cs.slots(); ++m)
            if (beta(k, m))
                h += cs(k, m, n);
        return h;
    }

    /// Debug dump: one row per (k, m, n), zero-based indices.
    inline void write_channel_csv(std::ostream &os, const ChannelSet &cs)
    {
        const auto prec = os.precision(17);
        os << "k,m,n,re,im,abs\n";
        for (std::size_t k = 0; k < cs.cables(); ++k)
            for (std::size_t m = 0; m < cs.slots(); ++m)
                for (std::size_t n = 0; n < cs.users(); ++n)
                {
                    const cplx h = cs(k, m, n);
                    os << k << ',' << m << ',' << n << ',' << h.real() << ',' << h.imag() << ','
                       << std::abs(h) << '\n';
                }
        os.precision(prec);
    }
}

#endif
