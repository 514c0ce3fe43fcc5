#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ba/macpoly.hpp"

using namespace ba;

static XPoly one_x() { return XPoly::monomial(Key{}, Scalar(1)); }

TEST_CASE("k = 0: nabla = 1 and <1,1> = 1") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(0)});
	Session s = make_session(*d, 1);
	CHECK(nabla_k(d, 0, s) == one_x());
	CHECK(scalar_product(d, 0, one_x(), one_x(), s) == Scalar(1));
	CHECK_THROWS_AS(nabla_k(d, -1, s), NonIntegerK);
}

TEST_CASE("A1, k = 1: <1,1> = 2") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	// CT of (1 - q^{<a,x>})(1 - q^{-<a,x>}) = CT[2 - q^{<a,x>} - q^{-<a,x>}]
	CHECK(scalar_product(d, 1, one_x(), one_x(), s) == Scalar(2));
}

TEST_CASE("scalar product is symmetric in its arguments") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	std::vector<Vec> ws = {Vec(d->dim, Rat(0)), d->fw[0], d->fw[1],
	                       d->fw[0] + d->fw[1]};
	for (long k = 1; k <= 2; ++k)
		for (const Vec& a : ws)
			for (const Vec& b : ws) {
				XPoly f = orbit_poly(*d, a, s.scale);
				XPoly g = orbit_poly(*d, b, s.scale);
				CHECK(scalar_product(d, k, f, g, s) ==
				      scalar_product(d, k, g, f, s));
			}
}

TEST_CASE("p_0 = 1 and A1 p_omega = m_omega") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	auto p0 = macdonald_poly(d, 1, Vec(d->dim, Rat(0)), s);
	CHECK(p0.monomial_expansion == one_x());
	auto pw = macdonald_poly(d, 2, d->fw[0], s);
	CHECK(pw.monomial_expansion == orbit_poly(*d, d->fw[0], s.scale));
}

TEST_CASE("A1: p_{2 omega} = m_{2 omega} + a m_0") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	Vec lam = Rat(2) * d->fw[0];
	for (long k = 1; k <= 3; ++k) {
		CAPTURE(k);
		auto p = macdonald_poly(d, k, lam, s);
		REQUIRE(p.orbit_expansion.count(key_of(lam, s.scale)) == 1);
		CHECK(p.orbit_expansion.at(key_of(lam, s.scale)) == Scalar(1));
		// orthogonal to everything below, nonzero norm
		CHECK(scalar_product(d, k, p.monomial_expansion, one_x(), s).is_zero());
		CHECK(!scalar_product(d, k, p.monomial_expansion, p.monomial_expansion, s)
		           .is_zero());
	}
	// k = 1 is the Schur case: chi_2 = m_{2 omega} + 1
	auto schur = macdonald_poly(d, 1, lam, s);
	XPoly expect = orbit_poly(*d, lam, s.scale) + one_x();
	CHECK(schur.monomial_expansion == expect);
}

TEST_CASE("backends agree") {
	auto d1 = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s1 = make_session(*d1, 1);
	Vec lam1 = Rat(3) * d1->fw[0];
	for (long k = 1; k <= 2; ++k) {
		auto g = macdonald_poly(d1, k, lam1, s1, MacBackend::gram_schmidt);
		auto e = macdonald_poly(d1, k, lam1, s1, MacBackend::eigen_solve);
		CHECK(g.monomial_expansion == e.monomial_expansion);
	}
	auto d2 = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s2 = make_session(*d2, 1);
	Vec lam2 = d2->fw[0] + d2->fw[1];
	auto g2 = macdonald_poly(d2, 1, lam2, s2, MacBackend::gram_schmidt);
	auto e2 = macdonald_poly(d2, 1, lam2, s2, MacBackend::eigen_solve);
	CHECK(g2.monomial_expansion == e2.monomial_expansion);
}

TEST_CASE("eigenvalue: D^pi p_lambda = m_pi(lambda - rho_{-k}) p_lambda") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	long k = 2;
	Vec lam = Rat(2) * d->fw[0];
	auto p = macdonald_poly(d, k, lam, s);
	std::vector<Rat> mv = {Rat(-k)};
	auto pis = minuscule_and_quasiminuscule(*d);
	auto op = build_macdonald_operator(d, pis[0].pi, s, &mv);
	auto ap = apply(op, p.monomial_expansion);
	REQUIRE(ap.exact);
	Vec rhok(d->dim, Rat(0));
	for (const auto& a : d->pos) rhok = rhok + Rat(-k, 2) * a;
	Scalar ev = orbit_value(*d, op.pi, lam - rhok);
	CHECK((ap.num - p.monomial_expansion.scaled(ev)).is_zero());
}

TEST_CASE("orthogonality of distinct polynomials") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	std::vector<Vec> lams = {Vec(d->dim, Rat(0)), d->fw[0], d->fw[1],
	                         d->fw[0] + d->fw[1]};
	std::vector<MacPolynomial> ps;
	for (const Vec& l : lams) ps.push_back(macdonald_poly(d, 1, l, s));
	for (size_t i = 0; i < ps.size(); ++i)
		for (size_t j = 0; j < ps.size(); ++j) {
			Scalar sp = scalar_product(d, 1, ps[i].monomial_expansion,
			                           ps[j].monomial_expansion, s);
			if (i == j)
				CHECK(!sp.is_zero());
			else
				CHECK(sp.is_zero());
		}
}

TEST_CASE("norms are positive at numeric q in (0,1)") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	for (long k = 1; k <= 3; ++k)
		for (long j = 0; j <= 3; ++j) {
			auto p = macdonald_poly(d, k, Rat(j) * d->fw[0], s);
			Scalar nrm = scalar_product(d, k, p.monomial_expansion,
			                            p.monomial_expansion, s);
			auto v = nrm.eval(0.5);
			CHECK(std::abs(v.imag()) < 1e-12);
			CHECK(v.real() > 0);
		}
}

TEST_CASE("wrong case and bad arguments") {
	auto dc = build_root_datum(
	    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
	Session sc = make_session(*dc, 1);
	CHECK_THROWS_AS(nabla_k(dc, 1, sc), WrongCase);
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	CHECK_THROWS_AS(macdonald_poly(d, 0, d->fw[0], s), NonIntegerK);
}

TEST_CASE("dominant_below enumerates the dominance cone") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Vec lam = d->fw[0] + d->fw[1];  // = sum of simple roots
	auto nus = dominant_below(*d, lam);
	// {0, fw0 + fw1}, deepest first
	REQUIRE(nus.size() == 2);
	CHECK(nus[0] == Vec(d->dim, Rat(0)));
	CHECK(nus[1] == lam);
	auto just = dominant_below(*d, d->fw[0]);
	REQUIRE(just.size() == 1);
	CHECK(just[0] == d->fw[0]);
}

TEST_CASE("eigenvalue separation predicate") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	// W(lambda - rho) vs W(mu - rho) for dominant mu < lambda (rho = -m alpha/2)
	// rho = alpha = 2 omega; mu = 2 rho - lambda gives W(mu - rho) = W(lambda - rho)
	CHECK(eigenvalue_separated(*d, Rat(6) * d->fw[0]));
	CHECK(!eigenvalue_separated(*d, Rat(3) * d->fw[0]));
}
