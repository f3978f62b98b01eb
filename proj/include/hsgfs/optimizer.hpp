#pragma once

// Binary feature-selection search engines. The hybrid engine couples
// gravitational attraction between particles (mass = normalized relative
// fitness) with a social pull toward the best archived solution, then adds a
// ranking-guided local search and a bounded memory of the best masks seen.
// Plain binary PSO and binary GSA engines serve as baselines.
//
// Determinism contract: every random draw happens on the sequential control
// path, in a fixed order (particles in index order, dimensions in ascending
// order). Fitness evaluations are pure and may run on any number of workers;
// results are merged in particle-index order, so a fixed seed produces a
// bit-identical RunResult regardless of worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hsgfs/knn.hpp"
#include "hsgfs/parallel.hpp"
#include "hsgfs/ranking.hpp"
#include "hsgfs/rng.hpp"

namespace hsgfs {

struct Particle {
    Mask position;
    std::vector<double> velocity;
    FitnessValue fitness;
    double raw_mass = 0.0;   // relative fitness in [0, 1]
    double norm_mass = 0.0;  // raw mass normalized over the swarm
};

struct HsgfsConfig {
    std::size_t population = 20;
    std::size_t max_iter = 15;
    double g0 = 1.0;             // initial gravitational constant
    double alpha = 20.0;         // descending coefficient of the G schedule
    double epsilon = 1e-9;       // guards zero distance and zero mass
    double v_max = 6.0;          // velocity clamp, keeps |tanh| off saturation
    std::size_t memory_capacity = 0;  // 0 = same as population
    bool local_search_enabled = true;
};

inline void validate(const HsgfsConfig& c) {
    if (c.population < 2) throw std::invalid_argument("population must be >= 2");
    if (c.g0 <= 0.0) throw std::invalid_argument("g0 must be positive");
    if (c.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (c.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (c.v_max <= 0.0) throw std::invalid_argument("v_max must be positive");
}

struct RunResult {
    Mask best_position;
    FitnessValue best_fitness;
    std::vector<double> convergence;  // incumbent accuracy after init and each iteration
    std::size_t n_selected = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;      // seconds
    std::uint64_t evaluations = 0;
};

enum class Algorithm { Hsgfs, Bpso, Bgsa };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Hsgfs: return "hsgfs";
        case Algorithm::Bpso: return "bpso";
        case Algorithm::Bgsa: return "bgsa";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "hsgfs") return Algorithm::Hsgfs;
    if (s == "bpso") return Algorithm::Bpso;
    if (s == "bgsa") return Algorithm::Bgsa;
    throw std::invalid_argument("unknown algorithm '" + s + "' (expected hsgfs, bpso or bgsa)");
}

// ---------------------------------------------------------------------------
// Population and mass machinery
// ---------------------------------------------------------------------------

// Random masks, each bit Bernoulli(0.5); an all-zero draw is repaired by
// setting one uniformly random bit. Velocities start at zero.
inline std::vector<Particle> init_population(std::size_t n, std::size_t N, Rng& rng) {
    if (n < 1) throw std::invalid_argument("need at least one feature");
    if (N < 2) throw std::invalid_argument("population must be >= 2");
    std::vector<Particle> pop(N);
    for (auto& p : pop) {
        p.position.resize(n);
        p.velocity.assign(n, 0.0);
        for (auto& bit : p.position) bit = next_unit(rng) < 0.5 ? 1 : 0;
        if (count_selected(p.position) == 0) p.position[next_index(rng, n)] = 1;
    }
    return pop;
}

// Relative masses: raw m_j = (fit_j - worst) / (best - worst), normalized to
// sum to one. When all fitnesses coincide the ratio is 0/0; every particle
// then gets raw mass 1 and normalized mass 1/N.
inline std::pair<std::vector<double>, std::vector<double>>
compute_masses(const std::vector<double>& fitnesses) {
    const std::size_t N = fitnesses.size();
    if (N < 2) throw std::invalid_argument("need at least 2 fitness values");
    const auto [lo_it, hi_it] = std::minmax_element(fitnesses.begin(), fitnesses.end());
    const double worst = *lo_it, best = *hi_it;

    std::vector<double> raw(N, 1.0);
    if (best > worst)
        for (std::size_t j = 0; j < N; ++j) raw[j] = (fitnesses[j] - worst) / (best - worst);
    double total = 0.0;
    for (const double m : raw) total += m;
    std::vector<double> norm(N);
    for (std::size_t j = 0; j < N; ++j) norm[j] = raw[j] / total;
    return {std::move(raw), std::move(norm)};
}

// G(t) = g0 * exp(-alpha * iter / max_iter), strictly decreasing in iter.
inline double grav_constant(std::size_t iter, const HsgfsConfig& cfg) {
    const double ratio =
        cfg.max_iter > 0 ? static_cast<double>(iter) / static_cast<double>(cfg.max_iter) : 0.0;
    return cfg.g0 * std::exp(-cfg.alpha * ratio);
}

// Gravitation weight c1 = -2 (iter/max_iter)^3 + 2: full at the start, zero at
// the end. The social weight c2 is its complement, so c1 + c2 == 2 always.
inline double accel_factor(std::size_t iter, std::size_t max_iter) {
    const double t =
        max_iter > 0 ? static_cast<double>(iter) / static_cast<double>(max_iter) : 0.0;
    return -2.0 * t * t * t + 2.0;
}

inline double social_factor(std::size_t iter, std::size_t max_iter) {
    const double t =
        max_iter > 0 ? static_cast<double>(iter) / static_cast<double>(max_iter) : 0.0;
    return 2.0 * t * t * t;
}

inline std::size_t hamming_distance(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mask lengths differ");
    std::size_t h = 0;
    for (std::size_t d = 0; d < a.size(); ++d)
        if (a[d] != b[d]) ++h;
    return h;
}

// Euclidean distance between binary positions; its square is exactly the
// Hamming count.
inline double particle_distance(const Mask& a, const Mask& b) {
    return std::sqrt(static_cast<double>(hamming_distance(a, b)));
}

// Total force on particle j: for every other particle i one fresh r ~ U[0,1]
// scales the pairwise force G * M_j * M_i / (R_ji + eps) * (x_id - x_jd),
// accumulated per dimension. Peers are visited in index order.
inline std::vector<double> total_force(std::size_t j, const std::vector<Particle>& swarm,
                                       double G, double epsilon, Rng& rng) {
    const Mask& own = swarm[j].position;
    std::vector<double> force(own.size(), 0.0);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        if (i == j) continue;
        const double r = next_unit(rng);
        const double dist = particle_distance(own, swarm[i].position);
        const double pull = G * swarm[j].norm_mass * swarm[i].norm_mass / (dist + epsilon);
        const Mask& other = swarm[i].position;
        for (std::size_t d = 0; d < own.size(); ++d) {
            const int diff = static_cast<int>(other[d]) - static_cast<int>(own[d]);
            if (diff != 0) force[d] += r * pull * static_cast<double>(diff);
        }
    }
    return force;
}

// a_d = F_d / (M_j + eps); epsilon keeps the worst particle's zero mass from
// blowing up the division.
inline std::vector<double> acceleration(std::vector<double> force, double norm_mass,
                                        double epsilon) {
    for (auto& f : force) f /= norm_mass + epsilon;
    return force;
}

// Hybrid velocity update: randomized inertia (one fresh r per dimension),
// gravitational acceleration weighted by c1 and pull toward the archive best
// weighted by c2. Components clamp to [-v_max, +v_max].
inline std::vector<double> update_velocity(const Particle& p, const std::vector<double>& accel,
                                           const Mask& gbest, std::size_t iter,
                                           const HsgfsConfig& cfg, Rng& rng) {
    const double c1 = accel_factor(iter, cfg.max_iter);
    const double c2 = social_factor(iter, cfg.max_iter);
    std::vector<double> v(p.velocity.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double r = next_unit(rng);
        const double social = static_cast<double>(gbest[d]) - static_cast<double>(p.position[d]);
        v[d] = std::clamp(r * p.velocity[d] + c1 * accel[d] + c2 * social,
                          -cfg.v_max, cfg.v_max);
    }
    return v;
}

inline double flip_probability(double velocity) { return std::abs(std::tanh(velocity)); }

constexpr std::size_t no_repair_feature = static_cast<std::size_t>(-1);

// Velocity-to-probability position update: each bit flips to its complement
// with probability |tanh(v_d)|. An all-zero result is repaired by setting
// repair_feature (the top-ranked feature), or one uniformly random bit when
// no ranking is available.
inline Mask update_position(const Particle& p, Rng& rng,
                            std::size_t repair_feature = no_repair_feature) {
    Mask pos = p.position;
    for (std::size_t d = 0; d < pos.size(); ++d) {
        const double u = next_unit(rng);
        if (u < flip_probability(p.velocity[d])) pos[d] = pos[d] ? 0 : 1;
    }
    if (count_selected(pos) == 0) {
        if (repair_feature == no_repair_feature)
            pos[next_index(rng, pos.size())] = 1;
        else
            pos[repair_feature] = 1;
    }
    return pos;
}

// ---------------------------------------------------------------------------
// Local search and memory
// ---------------------------------------------------------------------------

using FitnessFn = std::function<FitnessValue(const Mask&)>;

struct LocalSearchMove {
    bool applied = false;   // false when floor(5n/100) == 0 (n < 20)
    bool accepted = false;
    std::size_t add_count = 0;     // features forced on from the top of the ranking
    std::size_t delete_count = 0;  // lowest-ranked selected features cleared
    Mask post_add;                 // mask state right after the add step
    Mask candidate;                // mask handed to the fitness function
};

// Draws the move and builds the candidate mask without evaluating it. Add and
// delete counts are independent uniform draws from {1, ..., floor(5n/100)};
// when that bound is zero the step is skipped outright. Deletion walks the
// ranking from the bottom and never empties the mask.
inline LocalSearchMove plan_local_search(const Mask& position, const FeatureRanking& ranking,
                                         Rng& rng) {
    const std::size_t n = position.size();
    if (ranking.order.size() != n)
        throw std::invalid_argument("ranking does not cover all features");
    LocalSearchMove move;
    const std::size_t cap = (5 * n) / 100;
    if (cap == 0) return move;
    move.applied = true;
    move.add_count = next_int(rng, 1, cap);
    move.delete_count = next_int(rng, 1, cap);

    Mask candidate = position;
    for (std::size_t i = 0; i < move.add_count; ++i) candidate[ranking.order[i]] = 1;
    move.post_add = candidate;

    std::size_t remaining = count_selected(candidate);
    std::size_t deleted = 0;
    for (std::size_t ri = n; ri-- > 0;) {
        if (deleted == move.delete_count || remaining <= 1) break;
        const std::size_t f = ranking.order[ri];
        if (candidate[f]) {
            candidate[f] = 0;
            --remaining;
            ++deleted;
        }
    }
    move.candidate = std::move(candidate);
    return move;
}

// Ranking-guided improvement with greedy acceptance: the modified particle is
// kept only when its fitness is at least the original's, so fitness never
// decreases across a call. Costs exactly one fitness evaluation when applied.
inline Particle local_search(const Particle& p, const FeatureRanking& ranking, Rng& rng,
                             const FitnessFn& fitness_fn, LocalSearchMove* move_out = nullptr) {
    LocalSearchMove move = plan_local_search(p.position, ranking, rng);
    Particle out = p;
    if (move.applied) {
        const FitnessValue cand_fit = fitness_fn(move.candidate);
        if (fitness_at_least(cand_fit, p.fitness)) {
            move.accepted = true;
            out.position = move.candidate;
            out.fitness = cand_fit;
        }
    }
    if (move_out) *move_out = std::move(move);
    return out;
}

struct MemoryEntry {
    Mask position;
    FitnessValue fitness;
    std::uint64_t inserted = 0;  // arrival order, breaks remaining ties
};

// Bounded archive of the best distinct masks seen. Ordered by accuracy
// descending, then fewer selected features, then first inserted; the best
// entry never worsens over a run.
class MemoryArchive {
  public:
    explicit MemoryArchive(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ < 1) throw std::invalid_argument("memory capacity must be >= 1");
    }

    void insert(const Mask& position, const FitnessValue& fitness) {
        for (const auto& e : entries_)
            if (e.position == position) return;
        entries_.push_back({position, fitness, next_seq_++});
        std::sort(entries_.begin(), entries_.end(), [](const MemoryEntry& a, const MemoryEntry& b) {
            if (a.fitness.accuracy != b.fitness.accuracy)
                return a.fitness.accuracy > b.fitness.accuracy;
            if (a.fitness.n_selected != b.fitness.n_selected)
                return a.fitness.n_selected < b.fitness.n_selected;
            return a.inserted < b.inserted;
        });
        if (entries_.size() > capacity_) entries_.resize(capacity_);
    }

    const MemoryEntry& best() const {
        if (entries_.empty()) throw std::logic_error("memory archive is empty");
        return entries_.front();
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<MemoryEntry>& entries() const { return entries_; }

  private:
    std::size_t capacity_;
    std::uint64_t next_seq_ = 0;
    std::vector<MemoryEntry> entries_;
};

inline void update_memory(MemoryArchive& mem, const std::vector<Particle>& particles) {
    for (const auto& p : particles) mem.insert(p.position, p.fitness);
}

// ---------------------------------------------------------------------------
// Fitness evaluation batching
// ---------------------------------------------------------------------------

// Counts every fitness call and fans batches out over workers, merging the
// results in mask order.
class BatchEvaluator {
  public:
    BatchEvaluator(const SplitPair& split, const KnnConfig& knn, std::size_t workers)
        : split_(split), knn_(knn), workers_(workers) {}

    FitnessValue operator()(const Mask& mask) {
        ++calls_;
        return wrapper_fitness(mask, split_, knn_);
    }

    std::vector<FitnessValue> evaluate_all(const std::vector<Mask>& masks) {
        calls_ += masks.size();
        return parallel_map<FitnessValue>(masks.size(), workers_, [&](std::size_t i) {
            return wrapper_fitness(masks[i], split_, knn_);
        });
    }

    std::uint64_t calls() const { return calls_; }

  private:
    const SplitPair& split_;
    KnnConfig knn_;
    std::size_t workers_;
    std::uint64_t calls_ = 0;
};

namespace detail {

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

inline void check_inputs(const SplitPair& split, const HsgfsConfig& cfg) {
    validate(cfg);
    if (split.train.n_features != split.test.n_features)
        throw std::invalid_argument("train and test disagree on n_features");
    if (split.train.n_features < 1) throw std::invalid_argument("split has no features");
}

inline void finish_result(RunResult& res, const Mask& best, const FitnessValue& fit,
                          const BatchEvaluator& eval, const Stopwatch& timer) {
    res.best_position = best;
    res.best_fitness = fit;
    res.n_selected = count_selected(best);
    res.evaluations = eval.calls();
    res.wall_time = timer.seconds();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Engines
// ---------------------------------------------------------------------------

// The hybrid run: init -> evaluate, then per iteration masses -> G -> forces
// -> acceleration -> velocity -> position -> evaluate -> local search ->
// memory update. The archive's best entry is the social attractor and the
// reported result; the loop stops after exactly max_iter iterations.
inline RunResult hsgfs_run(const SplitPair& split, const FeatureRanking& ranking,
                           const HsgfsConfig& cfg, const KnnConfig& knn, std::uint64_t seed,
                           std::size_t workers = 1) {
    detail::check_inputs(split, cfg);
    const std::size_t n = split.train.n_features;
    if (ranking.order.size() != n)
        throw std::invalid_argument("ranking does not cover all features");

    const detail::Stopwatch timer;
    BatchEvaluator evaluate(split, knn, workers);
    Rng rng(seed);

    std::vector<Particle> swarm = init_population(n, cfg.population, rng);
    {
        std::vector<Mask> masks(swarm.size());
        for (std::size_t j = 0; j < swarm.size(); ++j) masks[j] = swarm[j].position;
        const std::vector<FitnessValue> fits = evaluate.evaluate_all(masks);
        for (std::size_t j = 0; j < swarm.size(); ++j) swarm[j].fitness = fits[j];
    }

    MemoryArchive memory(cfg.memory_capacity > 0 ? cfg.memory_capacity : cfg.population);
    update_memory(memory, swarm);

    RunResult res;
    res.seed = seed;
    res.convergence.push_back(memory.best().fitness.accuracy);

    const std::size_t N = swarm.size();
    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        std::vector<double> fits(N);
        for (std::size_t j = 0; j < N; ++j) fits[j] = swarm[j].fitness.accuracy;
        const auto [raw, norm] = compute_masses(fits);
        for (std::size_t j = 0; j < N; ++j) {
            swarm[j].raw_mass = raw[j];
            swarm[j].norm_mass = norm[j];
        }

        const double G = grav_constant(iter, cfg);
        const Mask gbest = memory.best().position;

        // synchronous movement: all forces read the iteration-start snapshot
        std::vector<std::vector<double>> accels(N);
        for (std::size_t j = 0; j < N; ++j) {
            std::vector<double> force = total_force(j, swarm, G, cfg.epsilon, rng);
            accels[j] = acceleration(std::move(force), swarm[j].norm_mass, cfg.epsilon);
        }
        for (std::size_t j = 0; j < N; ++j)
            swarm[j].velocity = update_velocity(swarm[j], accels[j], gbest, iter, cfg, rng);

        const std::size_t top_feature = ranking.order.front();
        std::vector<Mask> moved(N);
        for (std::size_t j = 0; j < N; ++j)
            moved[j] = update_position(swarm[j], rng, top_feature);
        const std::vector<FitnessValue> moved_fits = evaluate.evaluate_all(moved);
        for (std::size_t j = 0; j < N; ++j) {
            swarm[j].position = std::move(moved[j]);
            swarm[j].fitness = moved_fits[j];
        }

        if (cfg.local_search_enabled) {
            std::vector<LocalSearchMove> moves(N);
            for (std::size_t j = 0; j < N; ++j)
                moves[j] = plan_local_search(swarm[j].position, ranking, rng);
            if (moves.front().applied) {  // the cap depends on n alone
                std::vector<Mask> candidates(N);
                for (std::size_t j = 0; j < N; ++j) candidates[j] = moves[j].candidate;
                const std::vector<FitnessValue> cand_fits = evaluate.evaluate_all(candidates);
                for (std::size_t j = 0; j < N; ++j) {
                    if (fitness_at_least(cand_fits[j], swarm[j].fitness)) {
                        swarm[j].position = std::move(candidates[j]);
                        swarm[j].fitness = cand_fits[j];
                    }
                }
            }
        }

        update_memory(memory, swarm);
        res.convergence.push_back(memory.best().fitness.accuracy);
    }

    const MemoryEntry& champion = memory.best();
    detail::finish_result(res, champion.position, champion.fitness, evaluate, timer);
    return res;
}

struct BpsoParams {
    double w_start = 0.9;  // inertia decays linearly from w_start to w_end
    double w_end = 0.4;
    double c1 = 2.0;  // cognitive pull toward the personal best
    double c2 = 2.0;  // social pull toward the global best
};

inline double inertia_weight(std::size_t iter, std::size_t max_iter, const BpsoParams& p) {
    if (max_iter <= 1) return p.w_start;
    const double t = static_cast<double>(iter) / static_cast<double>(max_iter - 1);
    return p.w_start + (p.w_end - p.w_start) * t;
}

// One velocity component: v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x),
// fresh r1 and r2 per dimension, clamped to [-v_max, +v_max].
inline double bpso_velocity_component(double v, double x, double pbest_bit, double gbest_bit,
                                      double w, const BpsoParams& params, double v_max,
                                      Rng& rng) {
    const double r1 = next_unit(rng);
    const double r2 = next_unit(rng);
    const double next =
        w * v + params.c1 * r1 * (pbest_bit - x) + params.c2 * r2 * (gbest_bit - x);
    return std::clamp(next, -v_max, v_max);
}

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Standard binary PSO baseline with the logistic transfer: the bit is set to
// 1 when rand < S(v), else 0. Shares the population init path with the other
// engines, so equal seeds start from identical swarms.
inline RunResult bpso_run(const SplitPair& split, const HsgfsConfig& cfg, const KnnConfig& knn,
                          std::uint64_t seed, const BpsoParams& params = {},
                          std::size_t workers = 1) {
    detail::check_inputs(split, cfg);
    const std::size_t n = split.train.n_features;

    const detail::Stopwatch timer;
    BatchEvaluator evaluate(split, knn, workers);
    Rng rng(seed);

    std::vector<Particle> swarm = init_population(n, cfg.population, rng);
    const std::size_t N = swarm.size();
    {
        std::vector<Mask> masks(N);
        for (std::size_t j = 0; j < N; ++j) masks[j] = swarm[j].position;
        const std::vector<FitnessValue> fits = evaluate.evaluate_all(masks);
        for (std::size_t j = 0; j < N; ++j) swarm[j].fitness = fits[j];
    }

    std::vector<Mask> pbest(N);
    std::vector<FitnessValue> pbest_fit(N);
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < N; ++j) {
        pbest[j] = swarm[j].position;
        pbest_fit[j] = swarm[j].fitness;
        if (fitness_better(pbest_fit[j], pbest_fit[best_j])) best_j = j;
    }
    Mask gbest = pbest[best_j];
    FitnessValue gbest_fit = pbest_fit[best_j];

    RunResult res;
    res.seed = seed;
    res.convergence.push_back(gbest_fit.accuracy);

    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        const double w = inertia_weight(iter, cfg.max_iter, params);
        for (std::size_t j = 0; j < N; ++j) {
            Particle& p = swarm[j];
            for (std::size_t d = 0; d < n; ++d)
                p.velocity[d] = bpso_velocity_component(
                    p.velocity[d], static_cast<double>(p.position[d]),
                    static_cast<double>(pbest[j][d]), static_cast<double>(gbest[d]), w, params,
                    cfg.v_max, rng);
        }
        std::vector<Mask> moved(N);
        for (std::size_t j = 0; j < N; ++j) {
            Mask pos = swarm[j].position;
            for (std::size_t d = 0; d < n; ++d)
                pos[d] = next_unit(rng) < sigmoid(swarm[j].velocity[d]) ? 1 : 0;
            if (count_selected(pos) == 0) pos[next_index(rng, n)] = 1;
            moved[j] = std::move(pos);
        }
        const std::vector<FitnessValue> fits = evaluate.evaluate_all(moved);
        for (std::size_t j = 0; j < N; ++j) {
            swarm[j].position = std::move(moved[j]);
            swarm[j].fitness = fits[j];
            if (fitness_better(fits[j], pbest_fit[j])) {
                pbest[j] = swarm[j].position;
                pbest_fit[j] = fits[j];
            }
            if (fitness_better(pbest_fit[j], gbest_fit)) {
                gbest = pbest[j];
                gbest_fit = pbest_fit[j];
            }
        }
        res.convergence.push_back(gbest_fit.accuracy);
    }

    detail::finish_result(res, gbest, gbest_fit, evaluate, timer);
    return res;
}

// Binary GSA baseline: the hybrid machinery with the social term removed
// (v' = r v + a), no local search and no memory; the best solution is a plain
// running maximum. Position update keeps the |tanh| flip transfer; all-zero
// masks are repaired with one random bit since no ranking exists here.
inline RunResult bgsa_run(const SplitPair& split, const HsgfsConfig& cfg, const KnnConfig& knn,
                          std::uint64_t seed, std::size_t workers = 1) {
    detail::check_inputs(split, cfg);
    const std::size_t n = split.train.n_features;

    const detail::Stopwatch timer;
    BatchEvaluator evaluate(split, knn, workers);
    Rng rng(seed);

    std::vector<Particle> swarm = init_population(n, cfg.population, rng);
    const std::size_t N = swarm.size();
    {
        std::vector<Mask> masks(N);
        for (std::size_t j = 0; j < N; ++j) masks[j] = swarm[j].position;
        const std::vector<FitnessValue> fits = evaluate.evaluate_all(masks);
        for (std::size_t j = 0; j < N; ++j) swarm[j].fitness = fits[j];
    }

    std::size_t best_j = 0;
    for (std::size_t j = 1; j < N; ++j)
        if (fitness_better(swarm[j].fitness, swarm[best_j].fitness)) best_j = j;
    Mask best = swarm[best_j].position;
    FitnessValue best_fit = swarm[best_j].fitness;

    RunResult res;
    res.seed = seed;
    res.convergence.push_back(best_fit.accuracy);

    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        std::vector<double> fits(N);
        for (std::size_t j = 0; j < N; ++j) fits[j] = swarm[j].fitness.accuracy;
        const auto [raw, norm] = compute_masses(fits);
        for (std::size_t j = 0; j < N; ++j) {
            swarm[j].raw_mass = raw[j];
            swarm[j].norm_mass = norm[j];
        }

        const double G = grav_constant(iter, cfg);
        std::vector<std::vector<double>> accels(N);
        for (std::size_t j = 0; j < N; ++j) {
            std::vector<double> force = total_force(j, swarm, G, cfg.epsilon, rng);
            accels[j] = acceleration(std::move(force), swarm[j].norm_mass, cfg.epsilon);
        }
        for (std::size_t j = 0; j < N; ++j) {
            Particle& p = swarm[j];
            for (std::size_t d = 0; d < n; ++d)
                p.velocity[d] = std::clamp(next_unit(rng) * p.velocity[d] + accels[j][d],
                                           -cfg.v_max, cfg.v_max);
        }

        std::vector<Mask> moved(N);
        for (std::size_t j = 0; j < N; ++j) moved[j] = update_position(swarm[j], rng);
        const std::vector<FitnessValue> moved_fits = evaluate.evaluate_all(moved);
        for (std::size_t j = 0; j < N; ++j) {
            swarm[j].position = std::move(moved[j]);
            swarm[j].fitness = moved_fits[j];
            if (fitness_better(moved_fits[j], best_fit)) {
                best = swarm[j].position;
                best_fit = moved_fits[j];
            }
        }
        res.convergence.push_back(best_fit.accuracy);
    }

    detail::finish_result(res, best, best_fit, evaluate, timer);
    return res;
}

}  // namespace hsgfs
