#include <doctest.h>

#include <arh/componentwise.hpp>
#include <arh/smoothing.hpp>

#include "oracle.hpp"

#include <random>

using namespace arh;

namespace {
Grid<double> dyadic_grid(int J) { return make_grid(0.0, 4.0, 4.0 / ((1 << J) - 1)); }

VecXd random_vec(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    VecXd v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(gen);
    return v;
}

oracle::Vec to_vec(const VecXd& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

// Curves spanned by the sine basis with exactly centered coefficient columns.
struct CenteredSample {
    MatXd coeffs;
    std::vector<Curve<double>> curves;
    BasisSystem<double> basis;
};

CenteredSample centered_sine_sample(const Grid<double>& grid, int n, int M, unsigned seed) {
    CenteredSample out{MatXd(n, M), {}, sine_basis(grid, M)};
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < M; ++j) out.coeffs(i, j) = nd(gen);
    out.coeffs.rowwise() -= out.coeffs.colwise().mean();
    for (int i = 0; i < n; ++i)
        out.curves.push_back(reconstruct(VecXd(out.coeffs.row(i)), out.basis));
    return out;
}
}  // namespace

TEST_CASE("discrete wavelet transform is orthonormal") {
    SUBCASE("constant signal compresses to one scaling coefficient") {
        VecXd x = VecXd::Ones(4);
        const auto c = dwt(x, WaveletFamily::Haar, 0);
        CHECK(c.coeffs(0) == doctest::Approx(2.0).epsilon(1e-14));
        for (int p = 1; p < 4; ++p) CHECK(std::abs(c.coeffs(p)) < 1e-14);
    }
    SUBCASE("alternating signal lives in the finest detail level") {
        VecXd x(4);
        x << 1.0, -1.0, 1.0, -1.0;
        const auto c = dwt(x, WaveletFamily::Haar, 0);
        // layout [s_0, d_0, d_1]: the last two entries are the finest details
        CHECK(std::abs(c.coeffs(0)) < 1e-14);
        CHECK(std::abs(c.coeffs(1)) < 1e-14);
        CHECK(c.coeffs.tail(2).squaredNorm() == doctest::Approx(4.0).epsilon(1e-13));
    }
    SUBCASE("round trip and energy preservation on random signals") {
        for (const auto family : {WaveletFamily::Haar, WaveletFamily::Daubechies4})
            for (const int j0 : {0, 2}) {
                const VecXd x = random_vec(64, 7u + unsigned(j0));
                const auto c = dwt(x, family, j0);
                CHECK(std::abs(c.coeffs.squaredNorm() - x.squaredNorm()) < 1e-10);
                const VecXd back = idwt(c, family);
                CHECK((back - x).cwiseAbs().maxCoeff() < 1e-10);
            }
    }
    SUBCASE("pyramid agrees with the explicit matrix oracle") {
        const VecXd x = random_vec(16, 11u);
        const auto ch = dwt(x, WaveletFamily::Haar, 1);
        const auto cd = dwt(x, WaveletFamily::Daubechies4, 1);
        const auto rh = oracle::naive_dwt(to_vec(x), oracle::haar_filter(), 1);
        const auto rd = oracle::naive_dwt(to_vec(x), oracle::d4_filter(), 1);
        for (int p = 0; p < 16; ++p) {
            CHECK(ch.coeffs(p) == doctest::Approx(rh[p]).epsilon(1e-12));
            CHECK(cd.coeffs(p) == doctest::Approx(rd[p]).epsilon(1e-12));
        }
        const VecXd bh = idwt(ch, WaveletFamily::Haar);
        const auto nb = oracle::naive_idwt(rh, oracle::haar_filter(), 1);
        for (int p = 0; p < 16; ++p) CHECK(bh(p) == doctest::Approx(nb[p]).epsilon(1e-12));
    }
    SUBCASE("degenerate depth is the identity") {
        const VecXd x = random_vec(8, 13u);
        const auto c = dwt(x, WaveletFamily::Daubechies4, 3);
        CHECK((c.coeffs - x).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("non-dyadic lengths are rejected") {
        const VecXd x = VecXd::Zero(60);
        CHECK_THROWS_AS(dwt(x, WaveletFamily::Haar, 0), non_dyadic_length_error);
    }
}

TEST_CASE("wavelet smoothing shrinks detail content") {
    WaveletConfig cfg;
    cfg.family = WaveletFamily::Daubechies4;
    cfg.j0 = 2;
    cfg.J = 6;
    SUBCASE("zero penalty is the exact identity") {
        const auto grid = make_grid(0.0, 4.0, 0.06);  // non-dyadic on purpose
        Curve<double> f{grid, random_vec(int(grid.size()), 17u)};
        cfg.lambda = 0.0;
        const auto out = wavelet_smooth(f, cfg);
        CHECK((out.values - f.values).cwiseAbs().maxCoeff() == 0.0);
        CHECK(same_grid(out.grid, f.grid));
    }
    SUBCASE("huge penalty leaves only coarse-scale content") {
        const auto grid = dyadic_grid(6);
        Curve<double> f{grid, random_vec(64, 19u)};
        cfg.lambda = 1e12;
        const auto out = wavelet_smooth(f, cfg);
        const auto c = dwt(out.values, cfg.family, cfg.j0);
        const double detail_mass = c.coeffs.tail(64 - (1 << cfg.j0)).cwiseAbs().maxCoeff();
        CHECK(detail_mass < 1e-9 * f.values.norm());
    }
    SUBCASE("detail energy contracts by exactly 1/(1+lambda)") {
        // The wavelet transform is orthonormal, so shrinking the detail
        // block also caps the Euclidean norm of the output.
        const auto grid = dyadic_grid(6);
        const auto basis = sine_basis(grid, 8);
        for (const auto family : {WaveletFamily::Haar, WaveletFamily::Daubechies4})
            for (const double lam : {0.05, 5.0})
                for (unsigned seed = 0; seed < 10; ++seed) {
                    const auto f = reconstruct(random_vec(8, 100 + seed), basis);
                    WaveletConfig c2 = cfg;
                    c2.family = family;
                    c2.lambda = lam;
                    const auto out = wavelet_smooth(f, c2);
                    const auto cin = dwt(f.values, family, c2.j0);
                    const auto cout = dwt(out.values, family, c2.j0);
                    const Eigen::Index nd = 64 - (1 << c2.j0);
                    const double din = cin.coeffs.tail(nd).norm();
                    const double dout = cout.coeffs.tail(nd).norm();
                    CHECK(dout == doctest::Approx(din / (1.0 + lam)).epsilon(1e-10));
                    CHECK(out.values.norm() <= f.values.norm() * (1.0 + 1e-12));
                }
    }
    SUBCASE("non-dyadic grids resample through the dyadic mesh and back") {
        const auto grid = make_grid(0.0, 4.0, 0.06);
        const auto basis = sine_basis(grid, 6);
        const auto f = reconstruct(random_vec(6, 23u), basis);
        cfg.lambda = 0.5;
        const auto out = wavelet_smooth(f, cfg);
        CHECK(out.values.allFinite());
        CHECK(same_grid(out.grid, f.grid));
        CHECK(out.values.cwiseAbs().maxCoeff() <= 2.0 * f.values.cwiseAbs().maxCoeff() + 1e-12);
    }
}

TEST_CASE("smoothing parameter from scenario spectra and from data") {
    ScenarioSpec<double> spec;  // diagonal defaults
    SUBCASE("single-mode closed form") {
        // C_1 (1 - rho_1^2) * C_1 / 1 = 0.36
        CHECK(lambda_hat(spec, 1, 1) == doctest::Approx(0.36).epsilon(1e-14));
    }
    SUBCASE("monotone in the point count and the mode count") {
        const double l16 = lambda_hat(spec, 50, 16);
        const double l64 = lambda_hat(spec, 50, 64);
        const double l256 = lambda_hat(spec, 50, 256);
        CHECK(l16 > l64);
        CHECK(l64 > l256);
        CHECK(lambda_hat(spec, 10, 64) < lambda_hat(spec, 50, 64));
        CHECK(l64 > 0.0);
    }
    SUBCASE("empirical estimate lands near the analytic value") {
        ScenarioSpec<double> small = spec;
        small.M = 8;
        const auto ops = validate(small);
        const auto series = simulate(ops, 400, 2024u);
        const auto grid = dyadic_grid(6);
        const auto basis = sine_basis(grid, 8);
        std::vector<Curve<double>> curves;
        for (int i = 0; i < series.n; ++i)
            curves.push_back(reconstruct(VecXd(series.data.row(i)), basis));
        const double analytic = lambda_hat(small, 8, 64);
        const double fitted = lambda_hat_empirical(curves, 8, 64);
        CHECK(fitted > 0.2 * analytic);
        CHECK(fitted < 5.0 * analytic);
    }
}

TEST_CASE("penalized smoother realizes the roughness-penalty inverse") {
    const auto grid = make_grid(0.0, 4.0, 0.06);
    SUBCASE("zero penalty is the identity") {
        const auto sm = make_penalized_smoother(grid, 0.0);
        const VecXd x = random_vec(int(grid.size()), 29u);
        CHECK((sm.apply(x) - x).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sm.A() - MatXd::Identity(grid.size(), grid.size())).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("huge penalty projects onto affine functions") {
        const auto sm = make_penalized_smoother(grid, 1e12);
        const VecXd x = random_vec(int(grid.size()), 31u);
        const VecXd y = sm.apply(x);
        // Euclidean least-squares affine fit of x on (1, t)
        MatXd Z(grid.size(), 2);
        Z.col(0).setOnes();
        Z.col(1) = grid.points;
        const VecXd ab = (Z.transpose() * Z).ldlt().solve(Z.transpose() * x);
        CHECK((y - Z * ab).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("hat operator is symmetric with spectrum in (0, 1]") {
        for (const double ell : {1e-3, 1.0, 1e3}) {
            const auto sm = make_penalized_smoother(grid, ell);
            CHECK((sm.A() - sm.A().transpose()).cwiseAbs().maxCoeff() < 1e-12);
            Eigen::SelfAdjointEigenSolver<MatXd> es(sm.A());
            CHECK(es.eigenvalues().minCoeff() > 0.0);
            CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
            CHECK((sm.A_sqrt() * sm.A_sqrt() - sm.A()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("smoothing contracts the weighted second-difference seminorm") {
        for (const double ell : {1e-3, 1.0, 1e3})
            for (unsigned seed = 0; seed < 5; ++seed) {
                const auto sm = make_penalized_smoother(grid, ell);
                const VecXd x = random_vec(int(grid.size()), 400 + seed);
                const VecXd y = sm.apply(x);
                CHECK(sm.roughness(y) <= sm.roughness(x) * (1.0 + 1e-12));
            }
    }
    SUBCASE("curve batch helper applies the same operator") {
        const auto basis = sine_basis(grid, 4);
        std::vector<Curve<double>> curves{reconstruct(random_vec(4, 37u), basis),
                                          reconstruct(random_vec(4, 38u), basis)};
        const auto [smoothed, sm] = penalized_smoother(curves, 0.5);
        REQUIRE(smoothed.size() == 2);
        for (int i = 0; i < 2; ++i)
            CHECK((smoothed[i].values - sm.A() * curves[i].values).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("penalized functional principal component predictor") {
    const auto grid = make_grid(0.0, 4.0, 0.01);
    SUBCASE("unpenalized full rank collapses to the componentwise matrix fit") {
        const auto sample = centered_sine_sample(grid, 40, 5, 41u);
        CoeffSeries<double> series;
        series.n = 40;
        series.M = 5;
        series.data = sample.coeffs;
        const VecXd qc = random_vec(5, 43u);
        const auto query = reconstruct(qc, sample.basis);
        const auto model = besse_penalized_predictor(sample.curves, SmootherConfig{0.0, 5});
        const auto got = predict(model, query);
        const auto want = reconstruct(VecXd(predict(bosq(series, 5), qc)), sample.basis);
        CHECK(std::sqrt(l2_distance_sq(got, want)) < 1e-8);
    }
    SUBCASE("rank one on proportional curves is a scalar autoregression") {
        VecXd shape_coeffs(5);
        shape_coeffs << 0.0, 1.0, 0.0, 0.3, 0.0;
        const auto basis = sine_basis(grid, 5);
        const auto shape = reconstruct(shape_coeffs, basis);
        const VecXd amp = random_vec(25, 47u);
        std::vector<Curve<double>> curves;
        for (int i = 0; i < 25; ++i) curves.push_back({grid, amp(i) * shape.values});
        CoeffSeries<double> amp_series;
        amp_series.n = 25;
        amp_series.M = 1;
        amp_series.data = amp;
        const double ratio = diag_known(amp_series, true, 1).rho_hat(0);
        const double q_amp = 1.7;
        const Curve<double> query{grid, q_amp * shape.values};
        const auto model = besse_penalized_predictor(curves, SmootherConfig{0.0, 1});
        const auto got = predict(model, query);
        CHECK((got.values - ratio * q_amp * shape.values).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("constant-in-time curves predict themselves") {
        const auto basis = sine_basis(grid, 3);
        const auto v = reconstruct(random_vec(3, 53u), basis);
        std::vector<Curve<double>> curves(6, v);
        const auto model = besse_penalized_predictor(curves, SmootherConfig{0.0, 1});
        const auto got = predict(model, v);
        CHECK((got.values - v.values).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("all-zero curves cannot be fit") {
        std::vector<Curve<double>> curves(5, Curve<double>{grid, VecXd::Zero(grid.size())});
        CHECK_THROWS_AS(besse_penalized_predictor(curves, SmootherConfig{0.0, 1}),
                        rank_deficiency_error);
    }
    SUBCASE("preconditions") {
        const auto basis = sine_basis(grid, 3);
        std::vector<Curve<double>> two{reconstruct(random_vec(3, 59u), basis),
                                       reconstruct(random_vec(3, 60u), basis)};
        CHECK_THROWS_AS(besse_penalized_predictor(two, SmootherConfig{0.0, 1}), invalid_n_error);
        std::vector<Curve<double>> four(4, reconstruct(random_vec(3, 61u), basis));
        CHECK_THROWS_AS(besse_penalized_predictor(four, SmootherConfig{0.0, 9}),
                        invalid_argument_error);
    }
}

TEST_CASE("kernel regression predictor") {
    const auto grid = make_grid(0.0, 4.0, 0.01);
    const auto basis = sine_basis(grid, 3);
    std::vector<Curve<double>> ramp;  // curves c * phi_1, c = 0..4
    for (int c = 0; c <= 4; ++c) {
        VecXd coef = VecXd::Zero(3);
        coef(0) = double(c);
        ramp.push_back(reconstruct(coef, basis));
    }
    SUBCASE("infinite bandwidth averages the successors") {
        VecXd mean_succ = VecXd::Zero(grid.size());
        for (int i = 1; i <= 4; ++i) mean_succ += ramp[i].values;
        mean_succ /= 4.0;
        const auto out = kernel_predictor(ramp, KernelConfig{1e12, 0.0}, ramp[2]);
        CHECK_FALSE(out.degenerate_fallback);
        CHECK((out.value.values - mean_succ).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("small bandwidth concentrates on the nearest curve's successor") {
        VecXd qc = VecXd::Zero(3);
        qc(0) = 0.05;
        const auto query = reconstruct(qc, basis);
        const auto out = kernel_predictor(ramp, KernelConfig{0.1, 0.0}, query);
        CHECK_FALSE(out.degenerate_fallback);
        CHECK((out.value.values - ramp[1].values).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("vanishing bandwidth falls back to the nearest successor") {
        VecXd qc = VecXd::Zero(3);
        qc(0) = 0.05;
        const auto query = reconstruct(qc, basis);
        const auto out = kernel_predictor(ramp, KernelConfig{1e-6, 0.0}, query);
        CHECK(out.degenerate_fallback);
        CHECK((out.value.values - ramp[1].values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("identical histories average their successors for any bandwidth") {
        std::vector<Curve<double>> same(5, ramp[2]);
        const auto out = kernel_predictor(same, KernelConfig{1.0, 0.0}, ramp[2]);
        CHECK((out.value.values - ramp[2].values).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("output stays inside the successor envelope") {
        std::vector<Curve<double>> curves;
        for (unsigned seed = 0; seed < 6; ++seed)
            curves.push_back(reconstruct(random_vec(3, 600 + seed), basis));
        const auto out = kernel_predictor(curves, KernelConfig{0.5, 0.0}, curves[0]);
        for (Eigen::Index p = 0; p < grid.size(); ++p) {
            double lo = curves[1].values(p), hi = lo;
            for (int i = 2; i < 6; ++i) {
                lo = std::min(lo, curves[i].values(p));
                hi = std::max(hi, curves[i].values(p));
            }
            CHECK(out.value.values(p) >= lo - 1e-12);
            CHECK(out.value.values(p) <= hi + 1e-12);
        }
    }
    SUBCASE("pre-smoothing feeds the weights and the successors") {
        const auto sm = make_penalized_smoother(grid, 1e-3);
        std::vector<Curve<double>> curves;
        for (unsigned seed = 0; seed < 4; ++seed)
            curves.push_back(reconstruct(random_vec(3, 700 + seed), basis));
        const auto out = kernel_predictor(curves, KernelConfig{2.0, 1e-3}, curves[0]);
        VecXd num = VecXd::Zero(grid.size());
        double den = 0.0;
        for (int i = 0; i + 1 < 4; ++i) {
            const Curve<double> xi{grid, sm.apply(curves[i].values)};
            const double d2 = l2_distance_sq(xi, curves[0]);
            const double w = std::exp(-0.5 * (d2 / 2.0) * (d2 / 2.0));
            num += w * (sm.apply(curves[i + 1].values));
            den += w;
        }
        CHECK((out.value.values - num / den).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("preconditions") {
        std::vector<Curve<double>> one{ramp[0]};
        CHECK_THROWS_AS(kernel_predictor(one, KernelConfig{1.0, 0.0}, ramp[0]), invalid_n_error);
        CHECK_THROWS_AS(kernel_predictor(ramp, KernelConfig{0.0, 0.0}, ramp[0]),
                        invalid_argument_error);
        const auto other = make_grid(0.0, 4.0, 0.06);
        Curve<double> wrong{other, VecXd::Zero(other.size())};
        CHECK_THROWS_AS(kernel_predictor(ramp, KernelConfig{1.0, 0.0}, wrong),
                        grid_mismatch_error);
    }
}

TEST_CASE("wavelet-smoothed componentwise predictor") {
    SUBCASE("toy sample matches the literal double-sum transcription") {
        const auto grid = make_grid(0.0, 4.0, 4.0 / 7);  // dyadic: 8 points
        REQUIRE(grid.size() == 8);
        WaveletConfig cfg;
        cfg.family = WaveletFamily::Haar;
        cfg.j0 = 1;
        cfg.J = 3;
        cfg.lambda = 0.7;
        std::vector<Curve<double>> curves;
        for (unsigned seed = 0; seed < 3; ++seed)
            curves.push_back({grid, random_vec(8, 800 + seed)});
        const Curve<double> query{grid, random_vec(8, 805u)};

        // oracle path: smooth, center, weighted covariance, Jacobi FPCA
        const auto h = oracle::haar_filter();
        oracle::Mat Y(3, oracle::Vec(8));
        for (int i = 0; i < 3; ++i) {
            auto c = oracle::naive_dwt(to_vec(curves[i].values), h, 1);
            for (int p = 2; p < 8; ++p) c[p] /= 1.0 + cfg.lambda;
            Y[i] = oracle::naive_idwt(c, h, 1);
        }
        oracle::Vec mean(8, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 8; ++p) mean[p] += Y[i][p] / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 8; ++p) Y[i][p] -= mean[p];
        oracle::Mat B(8, oracle::Vec(8, 0.0));
        for (int p = 0; p < 8; ++p)
            for (int q = 0; q < 8; ++q) {
                double cpq = 0.0;
                for (int i = 0; i < 3; ++i) cpq += Y[i][p] * Y[i][q] / 3.0;
                B[p][q] = std::sqrt(grid.weights(p) * grid.weights(q)) * cpq;
            }
        oracle::Vec ev;
        oracle::Mat U;
        oracle::jacobi_eigensymm(B, ev, U);
        oracle::Mat f(2, oracle::Vec(8));
        for (int k = 0; k < 2; ++k)
            for (int p = 0; p < 8; ++p) f[k][p] = U[p][k] / std::sqrt(grid.weights(p));
        oracle::Mat Yscores(3, oracle::Vec(2, 0.0));
        oracle::Vec qscores(2, 0.0);
        for (int k = 0; k < 2; ++k) {
            for (int i = 0; i < 3; ++i)
                for (int p = 0; p < 8; ++p)
                    Yscores[i][k] += grid.weights(p) * f[k][p] * Y[i][p];
            for (int p = 0; p < 8; ++p)
                qscores[k] += grid.weights(p) * f[k][p] * query.values(p);
        }
        const auto coeffs = oracle::naive_smoothed_predictor_coeffs(
            Yscores, oracle::Vec(ev.begin(), ev.begin() + 2), qscores, 2);
        VecXd want = VecXd::Zero(8);
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 8; ++p) want(p) += coeffs[j] * f[j][p];

        const auto model = wavelet_predictor(curves, 2, cfg);
        const auto got = predict(model, query);
        CHECK((got.values - want).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("with smoothing off it collapses to the componentwise matrix fit") {
        const auto grid = make_grid(0.0, 4.0, 0.01);
        const auto sample = centered_sine_sample(grid, 40, 5, 71u);
        CoeffSeries<double> series;
        series.n = 40;
        series.M = 5;
        series.data = sample.coeffs;
        const VecXd qc = random_vec(5, 73u);
        const auto query = reconstruct(qc, sample.basis);
        WaveletConfig cfg;
        cfg.lambda = 0.0;
        const auto model = wavelet_predictor(sample.curves, 3, cfg);
        const auto got = predict(model, query);
        const auto want = reconstruct(VecXd(predict(bosq(series, 3), qc)), sample.basis);
        CHECK(std::sqrt(l2_distance_sq(got, want)) < 1e-8);
    }
    SUBCASE("independent curves carry no predictive signal") {
        const auto grid = dyadic_grid(6);
        const auto basis = sine_basis(grid, 4);
        const int n = 400;
        std::vector<Curve<double>> curves;
        for (int i = 0; i < n; ++i) curves.push_back(reconstruct(random_vec(4, 900 + i), basis));
        WaveletConfig cfg;
        cfg.lambda = 0.0;
        const auto model = wavelet_predictor(curves, 1, cfg);
        const auto query = reconstruct(random_vec(4, 1500u), basis);
        const auto got = predict(model, query);
        const double qnorm = std::sqrt(inner_product(query, query));
        CHECK(std::sqrt(inner_product(got, got)) < 5.0 * qnorm / std::sqrt(double(n)));
    }
    SUBCASE("rank gate rejects truncation beyond the sample rank") {
        const auto grid = dyadic_grid(3);
        std::vector<Curve<double>> curves;
        for (unsigned seed = 0; seed < 3; ++seed)
            curves.push_back({grid, random_vec(8, 950 + seed)});
        WaveletConfig cfg;
        cfg.lambda = 0.0;
        // three centered curves span at most two directions
        CHECK_THROWS_AS(wavelet_predictor(curves, 3, cfg), rank_deficiency_error);
        CHECK_THROWS_AS(wavelet_predictor(curves, 0, cfg), invalid_argument_error);
        std::vector<Curve<double>> two(curves.begin(), curves.begin() + 2);
        CHECK_THROWS_AS(wavelet_predictor(two, 1, cfg), invalid_n_error);
    }
}
