#pragma once

#include "levy/density.hpp"
#include "levy/fields.hpp"
#include "levy/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levy
{
    enum class Family { BrownianDrift, IsotropicStable, StableLike, RadialJump, FiniteJump, Custom };
    enum class EnvelopeMode { ClosedForm, GridSampled };

    std::string to_string(Family f);

    struct StateGrid
    {
        double lo = -10.0;
        double hi = 10.0;
        int points = 21;
    };

    // Grid points with distinct key(x), in grid order; no dedupe when key is empty.
    // dep limits which grid points are visited.
    std::vector<Vec> enumerate_states(const StateGrid &grid, int d, Dependence dep,
                                      const std::function<std::vector<double>(const Vec &)> &key);

    // Jump parts a triplet can carry.
    struct NoJumps {};
    struct StableJumps { ScalarField alpha, gamma; };             // symbol gamma(x)|xi|^alpha(x)
    struct RadialJumps { RadialLevyDensity density; };
    struct AtomJumps { std::vector<std::pair<Vec, double>> atoms; };   // finite measure sum w_i delta_{y_i}
    using JumpSpec = std::variant<NoJumps, StableJumps, RadialJumps, AtomJumps>;

    struct LevyTriplet
    {
        int dim = 1;
        std::function<Vec(const Vec &)> drift;
        std::function<Mat(const Vec &)> diffusion;
        JumpSpec jumps = NoJumps{};
    };

    // b(x) = drift_scale(x) b, C(x) = diffusion_scale(x) C
    struct BrownianParams
    {
        Vec drift;
        Mat diffusion;
        ScalarField drift_scale{1.0};
        ScalarField diffusion_scale{1.0};
    };

    // -i<xi, beta_scale(x) beta> + gamma(x)|xi|^alpha(x)
    struct StableParams
    {
        ScalarField alpha;
        ScalarField gamma{1.0};
        Vec beta;            // empty means zero
        ScalarField beta_scale{1.0};
    };

    // c(x)|xi|^2/2 + int (1 - cos<xi,y>) n(x,|y|) dy
    struct RadialParams
    {
        RadialLevyDensity density;
        ScalarField diffusion_scale{0.0};
    };

    // x-envelopes of the symbol at one frequency
    struct Envelope
    {
        double sup_abs = 0.0;
        double inf_re = 0.0;
        double sup_abs_im = 0.0;
        double inf_abs = 0.0;
    };

    class SymbolModel
    {
    public:
        static SymbolModel brownian(int d, BrownianParams p, EnvelopeMode mode = EnvelopeMode::ClosedForm,
                                    StateGrid grid = {});
        static SymbolModel standard_brownian(int d);
        static SymbolModel isotropic_stable(int d, double alpha, double gamma = 1.0);
        static SymbolModel stable_like(int d, StableParams p, EnvelopeMode mode = EnvelopeMode::ClosedForm,
                                       StateGrid grid = {});
        static SymbolModel radial_jump(RadialLevyDensity n, ScalarField diffusion_scale = 0.0,
                                       EnvelopeMode mode = EnvelopeMode::GridSampled, StateGrid grid = {});
        static SymbolModel finite_jump(int d, ScalarField alpha, EnvelopeMode mode = EnvelopeMode::GridSampled,
                                       StateGrid grid = {});
        static SymbolModel custom(LevyTriplet t, StateGrid grid = {});

        // the model with symbol c*q
        SymbolModel scaled(double c) const;

        Family family() const { return family_; }
        int dim() const { return d_; }
        EnvelopeMode mode() const { return mode_; }
        const StateGrid &grid() const { return grid_; }
        double scale() const { return scale_; }
        const LevyTriplet &triplet() const { return triplet_; }

        const BrownianParams *brownian_params() const { return std::get_if<BrownianParams>(&params_); }
        const StableParams *stable_params() const { return std::get_if<StableParams>(&params_); }
        const RadialParams *radial_params() const { return std::get_if<RadialParams>(&params_); }
        // alpha of a finite_jump model
        const ScalarField *finite_jump_alpha() const { return jump_alpha_ ? &*jump_alpha_ : nullptr; }

        bool x_independent() const { return states_.size() == 1 && dependence_ == Dependence::None; }
        Dependence dependence() const { return dependence_; }
        // one state per distinct local parameter set found on the grid
        const std::vector<Vec> &states() const { return states_; }

        // radial jump density of the symbol, when it has one (the stable families included)
        std::optional<RadialLevyDensity> jump_density() const;
        // drift vanishes identically
        bool drift_free() const;

        quad::Options quadrature;

    private:
        SymbolModel() = default;
        void finish();

        Family family_ = Family::Custom;
        int d_ = 1;
        EnvelopeMode mode_ = EnvelopeMode::GridSampled;
        StateGrid grid_;
        double scale_ = 1.0;
        LevyTriplet triplet_;
        std::variant<std::monostate, BrownianParams, StableParams, RadialParams> params_;
        Dependence dependence_ = Dependence::None;
        std::vector<Vec> states_;
        std::optional<ScalarField> jump_alpha_;
        std::optional<RadialLevyDensity> jump_density_;
        std::optional<RadialLevyDensity> build_jump_density() const;
        std::shared_ptr<Memo<Envelope>> envelope_cache_ = std::make_shared<Memo<Envelope>>();

        friend Envelope envelopes(const SymbolModel &m, const Vec &xi);
    };

    cplx eval_symbol(const SymbolModel &m, const Vec &x, const Vec &xi);

    Envelope envelopes(const SymbolModel &m, const Vec &xi);
    double sup_abs_q(const SymbolModel &m, const Vec &xi);
    double inf_re_q(const SymbolModel &m, const Vec &xi);
    double sup_abs_im_q(const SymbolModel &m, const Vec &xi);

    struct SectorResult
    {
        bool holds = true;
        double worst_ratio = 0.0;       // max over the test grid of sup|Im q| / inf Re q
        std::optional<Vec> witness;
    };
    // sup_x|Im q| <= c inf_x Re q on a test grid of frequencies
    SectorResult sector_check(const SymbolModel &m, double c);

    bool radiality_check(const SymbolModel &m);
    // q(x,xi) == q(-x,-xi) on sampled pairs
    bool symmetry_check(const SymbolModel &m);
    // Im q == 0 on sampled pairs
    bool real_symbol(const SymbolModel &m);

    // quasi-random unit vectors: +-1 in d=1, equally spaced angles in d=2, Halton-normal otherwise
    std::vector<Vec> sphere_directions(int d, int count);
    // frequencies used by sector_check and the sampled checks
    std::vector<Vec> frequency_grid(int d);
}
