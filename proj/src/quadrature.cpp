#include "levy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace levy::quad
{
    namespace
    {
        // 21-point Kronrod abscissae and weights, 10-point Gauss weights (QUADPACK qk21)
        const double xgk[11] = {
            0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
            0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
            0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
            0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
            0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
            0.0};
        const double wgk[11] = {
            0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
            0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
            0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
            0.123491976262065851077208024310960, 0.134709217311473325928054001771707,
            0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
            0.149445554002916905664936468389821};
        const double wg[5] = {
            0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
            0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
            0.295524224714752870173892994651271};

        struct Piece
        {
            double a, b, value, error;
            bool operator<(const Piece &o) const { return error < o.error; }
        };

        Piece gk21(const Fn &f, double a, double b)
        {
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            const double fc = f(c);
            double resk = fc * wgk[10], resg = 0.0;
            double resabs = std::abs(resk);
            double fv1[10], fv2[10];
            for (int j = 0; j < 10; ++j) {
                const double dx = h * xgk[j];
                fv1[j] = f(c - dx);
                fv2[j] = f(c + dx);
                const double s = fv1[j] + fv2[j];
                resk += wgk[j] * s;
                resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
                if (j % 2 == 1) resg += wg[j / 2] * s;
            }
            const double mean = 0.5 * resk;
            double resasc = wgk[10] * std::abs(fc - mean);
            for (int j = 0; j < 10; ++j)
                resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

            resk *= h;
            resg *= h;
            resabs *= std::abs(h);
            resasc *= std::abs(h);
            double err = std::abs(resk - resg);
            if (resasc != 0.0 && err != 0.0)
                err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
            const double eps = std::numeric_limits<double>::epsilon();
            if (resabs > std::numeric_limits<double>::min() / (50 * eps))
                err = std::max(50 * eps * resabs, err);
            return {a, b, resk, err};
        }

        // dyadic block summation shared by the two tail routines
        Result blocks(const Fn &f, double start, double factor, int max_blocks, const Options &opt)
        {
            Result total;
            double prev = 0.0;
            std::vector<double> ratios;
            double lo = start;
            for (int k = 0; k < max_blocks; ++k) {
                const double hi = lo * factor;
                const Result blk = integrate(f, std::min(lo, hi), std::max(lo, hi), opt);
                total.value += blk.value;
                total.error += blk.error;
                total.evaluations += blk.evaluations;
                total.converged = total.converged && blk.converged;
                const double b = blk.value;
                if (!std::isfinite(total.value)) {
                    total.divergent = true;
                    return total;
                }
                if (prev != 0.0) ratios.push_back(b / prev);
                prev = b;
                lo = hi;

                if (total.value != 0.0 && std::abs(b) <= 1e-17 * std::abs(total.value)) return total;
                if (ratios.empty()) continue;
                const double r = ratios.back();
                if (r > 0.0 && r < 1.0) {
                    const double rem = b * r / (1.0 - r);
                    // error of the geometric tail from the drift of the last ratio
                    double drift = INFINITY;
                    if (ratios.size() >= 3) {
                        const std::size_t n = ratios.size();
                        drift = std::max(std::abs(ratios[n - 1] - ratios[n - 2]), std::abs(ratios[n - 2] - ratios[n - 3]));
                    }
                    const bool stable = std::abs(b) * drift / ((1.0 - r) * (1.0 - r)) <=
                                        opt.rel_tol * std::abs(total.value + rem);
                    if (std::abs(rem) <= opt.rel_tol * std::abs(total.value) || stable) {
                        total.value += rem;
                        total.error += std::abs(rem) * 1e-3;
                        return total;
                    }
                }
                if (k >= 10 && ratios.size() >= 5) {
                    if (std::all_of(ratios.end() - 5, ratios.end(), [](double q) { return q >= 1.0 - 1e-9; })) {
                        total.divergent = true;
                        total.value = std::numeric_limits<double>::infinity();
                        return total;
                    }
                }
            }
            total.truncated = true;
            if (!ratios.empty() && ratios.back() > 0.0 && ratios.back() < 1.0)
                total.value += prev * ratios.back() / (1.0 - ratios.back());
            return total;
        }
    }

    Result integrate(const Fn &f, double a, double b, const Options &opt)
    {
        Result res;
        if (a == b) return res;
        if (std::abs(b - a) <= 1e-14 * std::max(std::abs(a), std::abs(b))) {
            res.value = (b - a) * f(0.5 * (a + b));
            res.evaluations = 1;
            return res;
        }
        std::priority_queue<Piece> heap;
        Piece p = gk21(f, a, b);
        res.evaluations = 21;
        double value = p.value, error = p.error;
        heap.push(p);
        int intervals = 1;
        while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
            if (intervals >= opt.max_intervals || !std::isfinite(value)) {
                res.converged = false;
                break;
            }
            const Piece worst = heap.top();
            const double mid = 0.5 * (worst.a + worst.b);
            if (mid <= worst.a || mid >= worst.b) {
                res.converged = false;     // interval cannot be split further
                break;
            }
            heap.pop();
            const Piece l = gk21(f, worst.a, mid), r = gk21(f, mid, worst.b);
            res.evaluations += 42;
            value += l.value + r.value - worst.value;
            error += l.error + r.error - worst.error;
            heap.push(l);
            heap.push(r);
            ++intervals;
        }
        // resum to shed accumulated cancellation in the running totals
        value = 0.0;
        error = 0.0;
        std::vector<Piece> all;
        all.reserve(heap.size());
        while (!heap.empty()) {
            all.push_back(heap.top());
            heap.pop();
        }
        std::sort(all.begin(), all.end(), [](const Piece &x, const Piece &y) { return x.a < y.a; });
        for (const Piece &q : all) {
            value += q.value;
            error += q.error;
        }
        res.value = value;
        res.error = error;
        return res;
    }

    Result integrate_dyadic(const Fn &f, double a, double b, const Options &opt)
    {
        Result total;
        if (!(a > 0.0)) return integrate(f, a, b, opt);
        double lo = a;
        while (lo < b) {
            const double hi = (lo * 4.0 >= b) ? b : lo * 2.0;
            const Result blk = integrate(f, lo, hi, opt);
            total.value += blk.value;
            total.error += blk.error;
            total.evaluations += blk.evaluations;
            total.converged = total.converged && blk.converged;
            lo = hi;
        }
        return total;
    }

    Result integrate_to_infinity(const Fn &f, double a, const Options &opt)
    {
        const int n = static_cast<int>(std::ceil(std::log2(opt.tail_span)));
        return blocks(f, a, 2.0, std::max(n, 8), opt);
    }

    Result integrate_from_zero(const Fn &f, double b, const Options &opt)
    {
        return blocks(f, b, 0.5, 400, opt);
    }
}
