// SPDX-License-Identifier: Apache-2.0
//
// losmodel - extraction and statistical modeling of line-of-sight probability
// in macrocell networks
// Copyright (C) 2026 the losmodel authors
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

#ifndef LOSMODEL_COMMON_HPP
#define LOSMODEL_COMMON_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace losmodel {

// Input files that do not parse or fail validation. Exit code 2 at the CLI.
class parse_error : public std::runtime_error {
  public:
    explicit parse_error(const std::string &msg) : std::runtime_error(msg) {}
};

// A pipeline stage that started but could not complete. Exit code 3 at the CLI.
class stage_error : public std::runtime_error {
  public:
    stage_error(const std::string &stage, const std::string &msg)
        : std::runtime_error("stage '" + stage + "': " + msg), stage_name(stage) {}
    std::string stage_name;
};

// Shortest round-trip decimal form; identical bytes for identical doubles, so
// file outputs are reproducible.
inline std::string format_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string &context)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw parse_error(context + ": bad number '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s, const std::string &context)
{
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw parse_error(context + ": bad integer '" + std::string(s) + "'");
    return v;
}

// 64-bit FNV-1a, used for artifact checksums.
inline std::uint64_t fnv1a64(const void *data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull)
{
    const unsigned char *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i)
    {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic pseudo-random stream. All randomness in the toolkit flows
// through this type: a top-level seed is split into named substreams so each
// pipeline stage (and each cell within a stage) is reproducible on its own.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x5eed5eed5eedull) { reseed(seed); }

    void reseed(std::uint64_t seed)
    {
        // splitmix-expanded state avoids correlated streams for nearby seeds
        std::uint64_t s = seed;
        for (auto &w : state_)
            w = splitmix64(s);
        have_spare_ = false;
    }

    // Derive an independent stream for a named stage or work unit.
    Rng substream(std::string_view label, std::uint64_t index = 0) const
    {
        std::uint64_t h = fnv1a64(label.data(), label.size(), state_[0] ^ 0x51f0a3c963b87d21ull);
        h = fnv1a64(&index, sizeof(index), h);
        return Rng(h);
    }

    std::uint64_t next_u64()
    {
        // xoshiro256** step
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1); never returns an exact endpoint.
    double uniform_open()
    {
        double u = uniform01();
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box-Muller. The spare is cached, so draw order is
    // part of the reproducible stream.
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    std::uint64_t uniform_index(std::uint64_t n) { return n ? next_u64() % n : 0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Worker count: explicit argument wins, then the LOSMODEL_WORKERS environment
// variable, then hardware concurrency.
inline unsigned resolve_workers(unsigned requested = 0)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("LOSMODEL_WORKERS"))
    {
        long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Index-based parallel loop. fn(i) must only touch state owned by index i;
// results are then independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned workers = 0)
{
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    auto worker = [&]() {
        for (;;)
        {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed))
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!failed.exchange(true))
                    first_error = std::current_exception();
                return;
            }
        }
    };
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (failed.load())
        std::rethrow_exception(first_error);
}

} // namespace losmodel

#endif
