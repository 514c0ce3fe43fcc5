#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ba/macops.hpp"

using namespace ba;

using XFrac = Frac<XPoly, Scalar>;

static XPoly one_poly() { return XPoly::monomial(Key{}, Scalar(1)); }

static XPoly binom(const Vec& a, const Scalar& c, long scale) {  // 1 - c X^a
	XPoly p = one_poly();
	p += XPoly::monomial(key_of(a, scale), Scalar(0) - c);
	return p;
}

static XFrac term_frac(const OpTerm& t, long scale) {
	XPoly n = XPoly::monomial(Key{}, t.pref);
	XPoly d = one_poly();
	for (const auto& b : t.num) n *= binom(b.a, b.c, scale);
	for (const auto& b : t.den) d *= binom(b.a, b.c, scale);
	return XFrac(n, d);
}

TEST_CASE("rank one operator and constants") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	Vec pi = d->fw[0];  // alpha/2
	auto op = build_macdonald_operator(d, pi, s);
	REQUIRE(op.terms.size() == 2);
	CHECK(!op.shifted_form);
	// coefficient at tau = alpha/2: (1 - t q^{<a,x>}) / (t^{1/2}(1 - q^{<a,x>}))
	for (const auto& t : op.terms) {
		Rat sg = d->ip(t.tau, d->simple[0]) > 0 ? Rat(1) : Rat(-1);
		Vec a = sg * d->simple[0];
		XFrac expect(binom(a, qpow(-1), s.scale), binom(a, Scalar(1), s.scale));
		expect *= XFrac(qpow(Rat(1, 2)));
		CHECK(term_frac(t, s.scale) == expect);
	}
	// sum of the a_tau collapses to the constant m_pi(-rho)
	auto r = apply(op, one_poly());
	CHECK(r.exact);
	CHECK(r.num == XPoly::monomial(Key{}, orbit_value(*d, pi, Rat(-1) * d->rho)));
}

TEST_CASE("m = 0 gives pure shifts") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(0)});
	Session s = make_session(*d, 1);
	auto op = build_macdonald_operator(d, d->fw[0], s);
	for (const auto& t : op.terms) {
		CHECK(t.num.empty());
		CHECK(t.den.empty());
		CHECK(t.pref == Scalar(1));
	}
	// D q^{<lambda,x>} = m_pi(lambda) q^{<lambda,x>}
	ExpFunction f;
	f.datum = d;
	f.scale = s.scale;
	f.sigma = Vec(d->dim, Rat(0));
	f.body = lift_poly(one_poly());
	auto r = apply(op, f);
	REQUIRE(r.exact);
	REQUIRE(r.body.size() == 1);
	CHECK(r.body.coeff(Key{}) == orbit_lambda(*d, d->fw[0], f.sigma, s.scale));
}

TEST_CASE("Ruijsenaars form of the A2 operator") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	Vec e1(d->dim, Rat(0));
	e1[0] = 1;
	auto op = build_macdonald_operator(d, e1, s);
	REQUIRE(op.terms.size() == 3);
	CHECK(!op.shifted_form);
	for (const auto& t : op.terms) {
		// locate i with tau = e_i, then transcribe the product over j != i of
		// (qh^{-m} w - qh^{m} w^{-1}) / (w - w^{-1}), w = qh^{x_i-x_j}, qh^2 = q
		int i = -1;
		for (int c = 0; c < d->dim; ++c)
			if (t.tau[c] == 1) i = c;
		REQUIRE(i >= 0);
		XFrac expect(Scalar(1));
		for (int j = 0; j < d->dim; ++j) {
			if (j == i) continue;
			Vec h(d->dim, Rat(0));
			h[i] = Rat(1, 2);
			h[j] = Rat(-1, 2);  // (e_i - e_j)/2
			XPoly n = XPoly::monomial(key_of(h, s.scale), qpow(Rat(-1, 2)));
			n += XPoly::monomial(key_of(Rat(-1) * h, s.scale), -qpow(Rat(1, 2)));
			XPoly dn = XPoly::monomial(key_of(h, s.scale), Scalar(1));
			dn += XPoly::monomial(key_of(Rat(-1) * h, s.scale), Scalar(-1));
			expect *= XFrac(n, dn);
		}
		CHECK(term_frac(t, s.scale) == expect);
	}
}

TEST_CASE("triangularity on orbit sums") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto op = build_macdonald_operator(d, d->fw[0], s);
	for (const Vec& lam : {Vec(d->fw[0] + d->fw[1]),
	                       Vec(Rat(2) * d->fw[0] + d->fw[1])}) {
		XPoly f = orbit_poly(*d, lam, s.scale);
		auto r = apply(op, f);
		REQUIRE(r.exact);
		Scalar c = orbit_value(*d, d->fw[0], lam - d->rho);
		XPoly rest = r.num - f.scaled(c);
		for (const auto& [k, coef] : rest.t) {
			Vec mu = dominant_representative(*d, vec_of(k, s.scale, d->dim));
			CHECK(d->dominance_less(mu, lam));
		}
	}
}

TEST_CASE("quasi-minuscule operator, shifted form") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto list = minuscule_and_quasiminuscule(*d);
	REQUIRE(!list.empty());
	const auto& qm = list.back();
	REQUIRE(!qm.minuscule);
	auto op = build_macdonald_operator(d, qm.pi, s);
	CHECK(op.shifted_form);
	CHECK(op.terms.size() == 6);
	CHECK(op.a0 == orbit_value(*d, qm.pi, Rat(-1) * d->rho));
	// (T^tau - 1) kills constants
	auto r = apply(op, one_poly());
	REQUIRE(r.exact);
	CHECK(r.num == XPoly::monomial(Key{}, op.a0));
	// still triangular on orbit sums
	Vec lam = d->fw[0] + d->fw[1];
	auto g = apply(op, orbit_poly(*d, lam, s.scale));
	REQUIRE(g.exact);
	XPoly rest = g.num - orbit_poly(*d, lam, s.scale)
	                         .scaled(orbit_value(*d, qm.pi, lam - d->rho));
	for (const auto& [k, coef] : rest.t)
		CHECK(d->dominance_less(
		    dominant_representative(*d, vec_of(k, s.scale, d->dim)), lam));
	// rejects a non-(quasi-)minuscule weight
	CHECK_THROWS_AS(
	    build_macdonald_operator(d, Vec(Rat(2) * d->fw[0] + Rat(2) * d->fw[1]), s),
	    NotQuasiMinuscule);
}

TEST_CASE("self-adjointness in the polynomial scalar product") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	std::vector<Rat> ov{Rat(-2)};  // t = q^2
	auto op = build_macdonald_operator(d, d->fw[0], s, &ov);
	XPoly nab = nabla_polynomial(*d, {Rat(2)}, s);
	XPoly f = orbit_poly(*d, d->fw[0], s.scale);
	XPoly g = orbit_poly(*d, d->fw[0] + d->fw[1], s.scale);
	auto df = apply(op, f);
	auto dg = apply(op, g);
	REQUIRE(df.exact);
	REQUIRE(dg.exact);
	Scalar lhs = (df.num * g.negated_argument() * nab).coeff(Key{});
	Scalar rhs = (f * dg.num.negated_argument() * nab).coeff(Key{});
	CHECK(lhs == rhs);
}

TEST_CASE("minuscule operators commute on invariants") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto d1 = build_macdonald_operator(d, d->fw[0], s);
	auto d2 = build_macdonald_operator(d, d->fw[1], s);
	for (const XPoly& f : {one_poly(), orbit_poly(*d, d->fw[0], s.scale),
	                       orbit_poly(*d, d->fw[0] + d->fw[1], s.scale)}) {
		auto a = apply(d1, f);
		auto b = apply(d2, f);
		REQUIRE(a.exact);
		REQUIRE(b.exact);
		auto ab = apply(d2, a.num);
		auto ba = apply(d1, b.num);
		REQUIRE(ab.exact);
		REQUIRE(ba.exact);
		CHECK(ab.num == ba.num);
	}
}

TEST_CASE("quasi-invariance in rank one") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	Session s = make_session(*d, 1);
	Vec half = Rat(1, 2) * d->simple[0];
	long m = 2;
	// u = q^x + q^{-x} (W-invariant)
	XPoly u = XPoly::monomial(key_of(half, s.scale), Scalar(1)) +
	          XPoly::monomial(key_of(Rat(-1) * half, s.scale), Scalar(1));
	CHECK(is_quasi_invariant(d, u, s).ok);
	// v = (q^x - q^{-x}) prod_{j=+-1..+-m} (q^{x+j} - q^{-x-j})
	XPoly v = XPoly::monomial(key_of(half, s.scale), Scalar(1)) +
	          XPoly::monomial(key_of(Rat(-1) * half, s.scale), Scalar(-1));
	for (long j = 1; j <= m; ++j)
		for (int sg : {1, -1}) {
			XPoly fac =
			    XPoly::monomial(key_of(half, s.scale), qpow(Rat(sg * j) / 2));
			fac += XPoly::monomial(key_of(Rat(-1) * half, s.scale),
			                       -qpow(Rat(-sg * j) / 2));
			v *= fac;
		}
	CHECK(is_quasi_invariant(d, v, s).ok);
	// v is delta0 * Q up to sign
	auto b = build_weights(d, s);
	XPoly dq = b.delta0 * b.Qx;
	CHECK((v == dq || v == -dq));
	// diagnostic failure: adding a stray q^{x/2} breaks the j=1 condition
	XPoly bad = u + XPoly::monomial(key_of(Rat(1, 2) * half, s.scale), Scalar(1));
	auto rep = is_quasi_invariant(d, bad, s);
	CHECK(!rep.ok);
	REQUIRE(!rep.failures.empty());
	CHECK(rep.failures[0].amount == 1);
	// the operator maps quasi-invariants to exact polynomials...
	auto op = build_macdonald_operator(d, d->fw[0], s);
	auto rv = apply(op, v);
	CHECK(rv.exact);
	// ...but a bare exponential e^{rho} stays rational
	auto re = apply(op, XPoly::monomial(key_of(d->rho, s.scale), Scalar(1)));
	CHECK(!re.exact);
	CHECK(!re.den.is_zero());
}

TEST_CASE("applying D to the seed q^{<lambda+rho,x>} Q(x)") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	auto b = build_weights(d, s);
	auto op = build_macdonald_operator(d, d->fw[0], s);
	ExpFunction f;
	f.datum = d;
	f.scale = s.scale;
	f.sigma = d->rho;
	f.body = lift_poly(b.Qx);
	auto r = apply(op, f);
	CHECK(r.exact);
	CHECK(!r.body.is_zero());
	CHECK(r.sigma == d->rho);
}

TEST_CASE("Koornwinder operator, n = 1") {
	auto d = build_root_datum(
	    Case::c, "C", 1, {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(0)});
	Session s = make_session(*d, 1);
	auto op = build_koornwinder_operator(d, s);
	REQUIRE(op.terms.size() == 2);
	CHECK(op.shifted_form);
	CHECK(op.a0 == qpow(Rat(3, 2)) + qpow(Rat(-3, 2)));
	for (const auto& t : op.terms) {
		CHECK(t.num.size() == 4);  // five-parameter v(z), no R^2 product
		CHECK(t.den.size() == 2);
	}
	// transcription of v(z) for tau = e_1
	const auto& t0 = op.terms[0];
	Vec tau = t0.tau;
	XPoly n = XPoly::monomial(Key{}, qpow(Rat(3, 2)));  // (q/(t1..t4))^{1/2}
	n *= binom(tau, qpow(Rat(-1, 2)), s.scale);
	n *= binom(tau, qpow(Rat(-1, 2)), s.scale);
	n *= binom(tau, Scalar(Rat(-1)) * qpow(Rat(-1, 2)), s.scale);
	n *= binom(tau, Scalar(Rat(-1)) * qpow(Rat(-1, 2)), s.scale);
	XPoly dn = binom(Rat(2) * tau, Scalar(1), s.scale) *
	           binom(Rat(2) * tau, qpow(1), s.scale);
	CHECK(term_frac(t0, s.scale) == XFrac(n, dn));
	// without one-integer-one-half-integer pairing of (m1,m2), (m3,m4) the
	// binomial denominators of D(q^{<rho,x>}Q) do not cancel
	auto b = build_weights(d, s);
	ExpFunction f;
	f.datum = d;
	f.scale = s.scale;
	f.sigma = d->rho;
	f.body = lift_poly(b.Qx);
	auto r = apply(op, f);
	CHECK(!r.exact);
	// wrong-case guards
	CHECK_THROWS_AS(build_koornwinder_operator(
	                    build_root_datum(Case::b, "A", 1, {Rat(1)}), s),
	                WrongCase);
	CHECK_THROWS_AS(build_macdonald_operator(d, d->fw[0], s), WrongCase);
	// with the pairing, D preserves functions divisible by Q
	auto dp = build_root_datum(
	    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
	Session sp = make_session(*dp, 1);
	auto opp = build_koornwinder_operator(dp, sp);
	auto bp = build_weights(dp, sp);
	ExpFunction fp;
	fp.datum = dp;
	fp.scale = sp.scale;
	fp.sigma = dp->rho;
	fp.body = lift_poly(bp.Qx);
	CHECK(apply(opp, fp).exact);
}

TEST_CASE("Koornwinder free point: D(1) = a0") {
	auto d = build_root_datum(
	    Case::c, "C", 1, {Rat(1, 2), Rat(-1, 2), Rat(-1, 2), Rat(-1, 2), Rat(0)});
	Session s = make_session(*d, 1);
	auto op = build_koornwinder_operator(d, s);
	CHECK(op.terms[0].pref == Scalar(1));  // t1 t2 t3 t4 = q
	auto r = apply(op, one_poly());
	REQUIRE(r.exact);
	CHECK(r.num == XPoly::monomial(Key{}, op.a0));
}

TEST_CASE("Koornwinder n = 2: triangularity and quasi-invariance of Q") {
	auto d = build_root_datum(
	    Case::c, "C", 2, {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1)});
	Session s = make_session(*d, 1);
	auto op = build_koornwinder_operator(d, s);
	REQUIRE(op.terms.size() == 4);
	// each term carries the R^2 product over roots pairing positively with tau
	for (const auto& t : op.terms) CHECK(t.num.size() == 4 + 2);
	Vec lam(d->dim, Rat(0));
	lam[0] = 1;  // e_1, smallest nonzero dominant weight
	XPoly f = orbit_poly(*d, lam, s.scale);
	auto r = apply(op, f);
	REQUIRE(r.exact);
	Scalar c = orbit_value(*d, op.pi, lam - d->rho);
	XPoly rest = r.num - f.scaled(c);
	for (const auto& [k, coef] : rest.t)
		CHECK(d->dominance_less(
		    dominant_representative(*d, vec_of(k, s.scale, d->dim)), lam));
	auto b = build_weights(d, s);
	CHECK(is_quasi_invariant(d, b.Qx, s).ok);
	CHECK(is_quasi_invariant(d, b.Qx * b.delta0, s).ok);
	XPoly e1m = XPoly::monomial(key_of(lam, s.scale), Scalar(1));
	CHECK(!is_quasi_invariant(d, e1m, s).ok);
}

TEST_CASE("twisted quasi-invariance conditions") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 2);
	REQUIRE(s.N == 2);
	// hand-solved member of the ell = 2 ring: q^x + q^{-x} + q^{1/2} + q^{-1/2}
	// (coefficients found by imposing f(x - a/2) = eps f(x + a/2) on
	// q^{<a,x>/2} = eps for eps = +-1)
	Vec half = Rat(1, 2) * d->simple[0];
	XPoly good = XPoly::monomial(key_of(half, s.scale), Scalar(1)) +
	             XPoly::monomial(key_of(Rat(-1) * half, s.scale), Scalar(1)) +
	             XPoly::monomial(Key{}, qpow(Rat(1, 2)) + qpow(Rat(-1, 2)));
	CHECK(is_quasi_invariant(d, good, s, 2).ok);
	// a plain W-invariant fails exactly at the nontrivial epsilon
	XPoly u = XPoly::monomial(key_of(half, s.scale), Scalar(1)) +
	          XPoly::monomial(key_of(Rat(-1) * half, s.scale), Scalar(1));
	auto rep = is_quasi_invariant(d, u, s, 2);
	CHECK(!rep.ok);
	for (const auto& fl : rep.failures) CHECK(fl.eps_power != 0);
}
