#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ba/bafunc.hpp"

using namespace ba;

static LPoly one_lpoly() { return LPoly::monomial(Key{}, Scalar(1)); }

// the closed-form coefficients of the rank-one function, transcribed from the
// two-parameter product formula (independent of rank_one_closed_form)
static LCoeff rank_one_coeff(const RootDatum& d, long m, long j, long scale) {
	Vec ha = Rat(1, 2) * d.pos[0];
	LCoeff cur(Scalar(1));
	for (long i = 1; i <= j; ++i) {
		LPoly n2;
		n2.add_term(key_of(Rat(-1) * ha, scale), qpow(Rat(-m + i - 1, 2)));
		n2.add_term(key_of(ha, scale), Scalar(0) - qpow(Rat(m - i + 1, 2)));
		LPoly d2;
		d2.add_term(key_of(Rat(-1) * ha, scale), qpow(Rat(i, 2)));
		d2.add_term(key_of(ha, scale), Scalar(0) - qpow(Rat(-i, 2)));
		Scalar n1 = qpow(Rat(-m + i - 1, 2)) - qpow(Rat(m - i + 1, 2));
		Scalar d1 = qpow(Rat(i, 2)) - qpow(Rat(-i, 2));
		cur = cur * LCoeff(n2.scaled(n1), d2.scaled(d1));
	}
	return cur;
}

TEST_CASE("rank one: three constructions agree, m = 1..3") {
	for (long m = 1; m <= 3; ++m) {
		CAPTURE(m);
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Session s = make_session(*d, 1);
		auto lin = construct_ba_linear(d, s);
		CHECK(lin.coeffs.size() == (size_t)m + 1);
		auto pis = minuscule_and_quasiminuscule(*d);
		auto it = construct_ba_iterative(d, pis[0].pi, s);
		CHECK(lin.coeffs == it.coeffs);
		auto cf = rank_one_closed_form(d, s);
		normalize(cf, s);
		CHECK(cf.coeffs == lin.coeffs);
	}
}

TEST_CASE("rank one: coefficients match the product formula") {
	for (long m = 1; m <= 3; ++m) {
		CAPTURE(m);
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Session s = make_session(*d, 1);
		auto lin = construct_ba_linear(d, s);
		// the product formula is in the psi_rho = 1 gauge
		LCoeff g = LCoeff(dual_delta_lambda(d, s)).inv();
		Vec alpha = d->pos[0];
		for (long j = 0; j <= m; ++j) {
			CAPTURE(j);
			Vec nu = d->rho - Rat(j) * alpha;
			CHECK(lin.coeff(nu) * g == rank_one_coeff(*d, m, j, s.scale));
		}
	}
}

TEST_CASE("rank one: odd coefficients vanish on the full weight lattice") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	Session s = make_session(*d, 1);
	auto full = construct_ba_linear(d, s, 1, true);
	auto lin = construct_ba_linear(d, s);
	// support rho + P has 5 points, rho + Q only 3; the extra ones get 0
	CHECK(full.support.size() == 5);
	CHECK(full.coeffs == lin.coeffs);
}

TEST_CASE("m = 0: the BA function is the plain exponential") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(0)});
	Session s = make_session(*d, 1);
	auto lin = construct_ba_linear(d, s);
	REQUIRE(lin.coeffs.size() == 1);
	CHECK(lin.coeff(Vec(d->dim, Rat(0))) == LCoeff(Scalar(1)));
}

TEST_CASE("A2 cases a and b, m = 1: linear and iterative constructions agree") {
	for (Case cs : {Case::a, Case::b}) {
		auto d = build_root_datum(cs, "A", 2, {Rat(1)});
		Session s = make_session(*d, 1);
		auto lin = construct_ba_linear(d, s);
		auto pis = minuscule_and_quasiminuscule(*d);
		auto it = construct_ba_iterative(d, pis[0].pi, s);
		CHECK(lin.coeffs == it.coeffs);
		CHECK(!lin.coeffs.empty());
	}
}

TEST_CASE("C1 with paired multiplicities: constructions agree, eigenfunction") {
	auto d = build_root_datum(
	    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
	Session s = make_session(*d, 1);
	auto lin = construct_ba_linear(d, s);
	auto it = construct_ba_iterative(d, Vec{}, s);
	CHECK(lin.coeffs == it.coeffs);
	auto op = build_koornwinder_operator(d, s);
	ExpFunction f = lin.function();
	ExpFunction g = apply(op, f);
	REQUIRE(g.exact);
	LCoeff ev = orbit_lambda(*d, op.pi, Vec(d->dim, Rat(0)), s.scale);
	CHECK((g.body - f.body.scaled(ev)).is_zero());
}

TEST_CASE("unpaired case-c multiplicities: no unique BA function") {
	auto d = build_root_datum(
	    Case::c, "C", 1, {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(0)});
	Session s = make_session(*d, 1);
	CHECK_THROWS_AS(construct_ba_linear(d, s), SolutionSpaceNotOneDimensional);
	CHECK_THROWS_AS(construct_ba_iterative(d, Vec{}, s),
	                ConstructionNotPolynomial);
}

TEST_CASE("eigenfunction identity, A1 m = 2") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	auto pis = minuscule_and_quasiminuscule(*d);
	auto op = build_macdonald_operator(d, pis[0].pi, s);
	ExpFunction f = ba.function();
	ExpFunction g = apply(op, f);
	REQUIRE(g.exact);
	LCoeff ev = orbit_lambda(*d, op.pi, Vec(d->dim, Rat(0)), s.scale);
	CHECK((g.body - f.body.scaled(ev)).is_zero());
}

TEST_CASE("normalization: psi_{w rho} = Delta'(w^{-1} lambda)") {
	auto check = [](const DatumPtr& d, const Session& s, const BaFunction& ba) {
		LPoly dl = dual_delta_lambda(d, s);
		for (size_t i = 0; i < d->weyl.size(); ++i) {
			Vec wr = mat_apply(d->weyl[i], d->rho);
			LCoeff c = ba.coeff(wr);
			REQUIRE(!c.is_zero());
			CHECK(c == LCoeff(dl.weyl_argument(d->weyl[i])));
		}
	};
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
		Session s = make_session(*d, 1);
		check(d, s, construct_ba_linear(d, s));
	}
	{
		auto d = build_root_datum(
		    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
		Session s = make_session(*d, 1);
		check(d, s, construct_ba_linear(d, s));
	}
}

TEST_CASE("duality: the coefficient table is symmetric for self-dual data") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	auto table = coefficient_table(ba);
	for (const auto& [k, p] : table)
		for (const auto& [k2, c] : p.t) {
			auto it = table.find(k2);
			REQUIRE(it != table.end());
			auto jt = it->second.t.find(k);
			REQUIRE(jt != it->second.t.end());
			CHECK(jt->second == c);
		}
}

TEST_CASE("duality against the dual datum, A2 case a") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	auto table = coefficient_table(ba);
	auto bad = construct_ba_linear(d->dual, s);
	auto tabled = coefficient_table(bad);
	// psi_{nu nu'} = psi*_{nu' nu}
	size_t checked = 0;
	for (const auto& [k, p] : table)
		for (const auto& [k2, c] : p.t) {
			auto it = tabled.find(k2);
			REQUIRE(it != tabled.end());
			auto jt = it->second.t.find(k);
			REQUIRE(jt != it->second.t.end());
			CHECK(jt->second == c);
			++checked;
		}
	CHECK(checked > 0);
}

TEST_CASE("evaluation at lambda = w rho collapses to a constant") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	LPoly dl = dual_delta_lambda(d, s);
	Scalar c0 =
	    eval_lcoeff(*d, LCoeff(dl), Rat(-1) * d->rho, s.scale);
	CHECK(!c0.is_zero());
	for (const auto& w : d->weyl) {
		Vec wr = mat_apply(w, d->rho);
		XPoly p = specialize_lambda(ba, wr);
		CHECK(p == XPoly::monomial(Key{}, c0));
	}
	// and the dual statement psi(rho, rho*) = Delta'(-rho)
	CHECK(evaluate(ba, d->rho, d->rho_star) == c0);
}

TEST_CASE("symmetrization: Phi_+ is W-invariant, Phi_- anti-invariant") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	Vec lam = d->rho + d->fw[0];  // generic-ish integral point
	XPoly plus = symmetrize(ba, lam, +1);
	XPoly minus = symmetrize(ba, lam, -1);
	CHECK(!plus.is_zero());
	for (size_t i = 0; i < d->weyl.size(); ++i) {
		XPoly wp = plus.weyl_argument(d->weyl[i]);
		CHECK(wp == plus);
		XPoly wm = minus.weyl_argument(d->weyl[i]);
		if (d->weyl_sign[i] == -1)
			CHECK(wm == -minus);
		else
			CHECK(wm == minus);
	}
}

TEST_CASE("twisted support: A1, ell = 2") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s2 = make_session(*d, 2);
	auto tw = construct_ba_linear(d, s2, 2);
	CHECK(!tw.coeffs.empty());
	// ell = 1 in the same session degenerates to the untwisted function
	auto un = construct_ba_linear(d, s2, 1);
	CHECK(un.coeffs.size() == 2);
	// inadmissible ell
	auto dc = build_root_datum(
	    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
	Session sc = make_session(*dc, 1);
	CHECK_THROWS_AS(construct_ba_linear(dc, sc, 3), EllNotAdmissible);
}

TEST_CASE("coefficient table entries are Laurent polynomials") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(3)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	auto table = coefficient_table(ba);
	CHECK(table.size() == ba.coeffs.size());
	CHECK(table.at(key_of(d->rho, s.scale)) == dual_delta_lambda(d, s));
}
