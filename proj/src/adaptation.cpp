#include "ace/adaptation.hpp"

#include <algorithm>
#include <stdexcept>

namespace ace::adapt {

std::array<double, kModeCount> selection_probabilities(const Propensities& p) {
    double total = 0.0;
    for (double w : p.weights) total += w;
    if (total <= 0.0)
        throw std::invalid_argument("propensity weights must sum to a positive value");
    std::array<double, kModeCount> probs{};
    for (int i = 0; i < kModeCount; ++i) probs[i] = p.weights[i] / total;
    return probs;
}

void validate(const LearningParams& p) {
    if (p.interval < 1) throw std::invalid_argument("review interval must be >= 1");
    if (p.gain < 0.0) throw std::invalid_argument("reinforcement gain must be >= 0");
    if (p.forgetting < 0.0 || p.forgetting >= 1.0)
        throw std::invalid_argument("forgetting factor must lie in [0,1)");
    if (p.floor <= 0.0) throw std::invalid_argument("propensity floor must be > 0");
}

namespace {

CoordinationMode draw_mode(const Propensities& p, RandomStream& stream) {
    const auto probs = selection_probabilities(p);
    const double u = stream.next_unit();
    double acc = 0.0;
    for (int i = 0; i < kModeCount; ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<CoordinationMode>(i);
    }
    return static_cast<CoordinationMode>(kModeCount - 1);
}

}  // namespace

ReviewResult review_mode(Propensities propensities, const LearningParams& params,
                         double v_start, double v_end, CoordinationMode used,
                         RandomStream& stream) {
    validate(params);
    const double reward =
        std::max(0.0, v_end - v_start) / std::max(v_start, 1e-9);
    for (int i = 0; i < kModeCount; ++i) {
        double w = (1.0 - params.forgetting) * propensities.weights[i];
        if (i == static_cast<int>(used)) w += params.gain * reward;
        propensities.weights[i] = std::max(w, params.floor);
    }
    return {propensities, draw_mode(propensities, stream)};
}

void validate_schedule(const std::vector<GrowthEvent>& schedule) {
    int last = 0;
    for (const GrowthEvent& e : schedule) {
        if (e.period <= last)
            throw std::invalid_argument("growth periods must be strictly ascending");
        if (e.n_add < 1) throw std::invalid_argument("growth must add >= 1 attribute");
        last = e.period;
    }
}

GrowthResult grow(const OrgDesign& org, const Landscape& landscape,
                  TaskComplexity complexity, const GrowthEvent& event,
                  RandomStream& stream) {
    if (event.n_add < 1) throw std::invalid_argument("growth must add >= 1 attribute");
    org::validate_complexity(org, landscape, complexity);

    const int old_n = landscape.n();
    const int new_n = old_n + event.n_add;

    GrowthResult result;
    result.org = org;
    result.org.units.push_back({old_n, event.n_add});

    nk::LandscapeSpec spec = landscape.spec;
    spec.n = new_n;
    std::vector<std::vector<int>> sets(new_n);
    std::vector<std::vector<double>> tables(new_n);

    if (complexity == TaskComplexity::Decomposable) {
        spec.block_sizes.push_back(event.n_add);
        for (int i = 0; i < old_n; ++i) {
            sets[i] = landscape.interaction_sets[i];
            tables[i] = landscape.tables[i];  // preserved bit-exactly
        }
        for (int i = old_n; i < new_n; ++i)
            for (int j = old_n; j < new_n; ++j)
                if (j != i) sets[i].push_back(j);
        for (int i = old_n; i < new_n; ++i) {
            tables[i].resize(std::size_t{1} << event.n_add);
            for (auto& v : tables[i]) v = stream.next_unit();
        }
    } else {
        spec.k = new_n - 1;
        for (int i = 0; i < new_n; ++i)
            for (int j = 0; j < new_n; ++j)
                if (j != i) sets[i].push_back(j);
        for (int i = 0; i < new_n; ++i) {
            tables[i].resize(std::size_t{1} << new_n);
            for (auto& v : tables[i]) v = stream.next_unit();
        }
    }
    result.landscape = nk::from_parts(std::move(spec), std::move(sets),
                                      std::move(tables));
    return result;
}

Configuration extend_configuration(const Configuration& config, int n_add,
                                   bool zero_init, RandomStream& stream) {
    Configuration c = config;
    for (int i = 0; i < n_add; ++i)
        c.bits.push_back(zero_init ? 0
                                   : static_cast<std::uint8_t>(stream.next_below(2)));
    return c;
}

std::vector<GrowthRow> run_growth_study(const GrowthStudySetup& setup,
                                        RandomStream& stream) {
    validate(setup.learning);
    validate_schedule(setup.schedule);
    org::validate_complexity(setup.org, setup.landscape, setup.complexity);
    if (setup.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!setup.schedule.empty() && setup.schedule.back().period > setup.horizon)
        throw std::invalid_argument("growth schedule extends past the horizon");

    OrgDesign org = setup.org;
    Landscape landscape = setup.landscape;
    Propensities propensities = setup.initial_propensities;
    Configuration config = org::random_configuration(landscape.n(), stream);
    CoordinationMode mode = draw_mode(propensities, stream);
    CoordinationMode pending = mode;

    std::vector<GrowthRow> rows;
    rows.reserve(setup.horizon + 1);
    auto record = [&](int period) {
        rows.push_back({period, mode, fitness(landscape, config), config,
                        propensities.weights, landscape.n(),
                        static_cast<int>(org.units.size())});
    };
    record(0);

    double window_start_v = rows.front().v;
    auto event = setup.schedule.begin();

    for (int t = 1; t <= setup.horizon; ++t) {
        mode = pending;
        config = org_step(org, mode, landscape, setup.strategy, setup.org_params,
                          config, stream)
                     .config;
        double v = fitness(landscape, config);

        if (t % setup.learning.interval == 0) {
            auto review = review_mode(propensities, setup.learning, window_start_v,
                                      v, mode, stream);
            propensities = review.propensities;
            pending = review.next_mode;  // takes effect next period
            window_start_v = v;
        }

        if (event != setup.schedule.end() && event->period == t) {
            auto grown = grow(org, landscape, setup.complexity, *event, stream);
            org = std::move(grown.org);
            landscape = std::move(grown.landscape);
            config = extend_configuration(config, event->n_add,
                                          setup.zero_init_new_bits, stream);
            v = fitness(landscape, config);
            window_start_v = v;  // the task changed; restart the window
            ++event;
        }

        record(t);
    }
    return rows;
}

}  // namespace ace::adapt
