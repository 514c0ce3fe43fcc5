#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ba/identities.hpp"

using namespace ba;

static XPoly one_x() { return XPoly::monomial(Key{}, Scalar(1)); }

static void check_factorization(const DatumPtr& d, const Session& s) {
	auto wb = build_weights(d, s);
	auto fx = qx_factorization(d, s);
	XPoly prod = XPoly::monomial(key_of(fx.two_rho, s.scale), Scalar(fx.sign));
	XPoly opp =
	    XPoly::monomial(key_of(Rat(-1) * fx.two_rho, s.scale), Scalar(fx.sign));
	for (const auto& f : fx.factors) {
		prod = prod * (one_x() - XPoly::monomial(key_of(Rat(-1) * f.a, s.scale),
		                                         f.c));
		opp = opp * (one_x() - XPoly::monomial(key_of(f.a, s.scale), f.c));
	}
	CHECK(prod == wb.Qx);
	CHECK(opp == wb.Qx);  // the pair structure makes both chambers equal
}

TEST_CASE("Delta(x)Delta(-x) factorization matches the weight bundle") {
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
		check_factorization(d, make_session(*d, 1));
	}
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
		check_factorization(d, make_session(*d, 1));
	}
	{
		auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
		check_factorization(d, make_session(*d, 1));
	}
	{
		auto d = build_root_datum(
		    Case::c, "C", 1, {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)});
		check_factorization(d, make_session(*d, 1));
	}
	{
		auto d = build_root_datum(Case::c, "C", 2,
		                          {Rat(1), Rat(1, 2), Rat(1, 2), Rat(0), Rat(1)});
		check_factorization(d, make_session(*d, 1));
	}
}

TEST_CASE("orthogonality: A1, m = 1 and 2") {
	for (long m : {1L, 2L}) {
		CAPTURE(m);
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Vec lam = Rat(7, 2) * d->fw[0];
		Session s = make_session(*d, 1, {lam});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		for (long k = 0; k <= 3; ++k) {
			CAPTURE(k);
			Vec mu = lam - Rat(k) * d->fw[0];
			auto r = verify_orthogonality(ba, lam, mu, s);
			CHECK(r.pass);
			auto ro = verify_orthogonality(ba, lam, mu, s, true);
			CHECK(ro.pass);
		}
	}
}

TEST_CASE("orthogonality: A2, m = 1") {
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Vec lam = Rat(7, 3) * d->fw[0] + Rat(5, 4) * d->fw[1];
	Session s = make_session(*d, 1, {lam});
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	std::vector<Vec> mus = {lam, lam - d->fw[0], lam - d->fw[1],
	                        lam - d->fw[0] - d->fw[1]};
	for (const Vec& mu : mus) {
		auto r = verify_orthogonality(ba, lam, mu, s);
		CHECK(r.pass);
		auto ro = verify_orthogonality(ba, lam, mu, s, true);
		CHECK(ro.pass);
	}
}

TEST_CASE("residue pairing across the weight hyperplanes") {
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
		Vec lam = Rat(5, 2) * d->fw[0];
		Vec mu = Rat(7, 3) * d->fw[0];
		Session s =
		    make_session(*d, 1, {lam, mu, Rat(1, 2) * d->coroot(d->pos[0])});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		auto r = verify_residue_pairing(ba, lam, mu, s);
		CHECK(r.pass);
	}
	{
		auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
		Vec lam = Rat(7, 3) * d->fw[0] + Rat(5, 4) * d->fw[1];
		Vec mu = Rat(3, 5) * d->fw[0] + Rat(8, 7) * d->fw[1];
		std::vector<Vec> extra = {lam, mu};
		for (const auto& a : d->pos) extra.push_back(Rat(1, 2) * d->coroot(a));
		Session s = make_session(*d, 1, extra);
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		auto r = verify_residue_pairing(ba, lam, mu, s);
		CHECK(r.pass);
	}
}

TEST_CASE("norm identity at t = q^{m+1}") {
	for (long m : {1L, 2L}) {
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Session s = make_session(*d, 1);
		for (long j = 0; j <= 2; ++j) {
			CAPTURE(m);
			CAPTURE(j);
			auto r = verify_norm_identity(d, Rat(j) * d->fw[0], s);
			CHECK(r.pass);
		}
	}
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	std::vector<Vec> lams = {Vec(d->dim, Rat(0)), d->fw[0], d->fw[1]};
	for (const Vec& lam : lams) {
		auto r = verify_norm_identity(d, lam, s);
		CHECK(r.pass);
	}
}

TEST_CASE("Weyl formula, antisymmetric side") {
	for (long m : {0L, 1L, 2L}) {
		CAPTURE(m);
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Session s = make_session(*d, 1);
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		for (long j = 0; j <= 2; ++j) {
			CAPTURE(j);
			Vec lam = d->rho_tilde + Rat(j + 1) * d->fw[0];
			auto r = verify_weyl_formula(ba, lam, -1, s);
			CHECK(r.pass);
		}
	}
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	std::vector<Vec> shifts = {d->fw[0] + d->fw[1], Rat(2) * d->fw[0] + d->fw[1]};
	for (const Vec& sh : shifts) {
		auto r = verify_weyl_formula(ba, d->rho_tilde + sh, -1, s);
		CHECK(r.pass);
	}
}

TEST_CASE("Weyl formula, symmetric side at t = q^{-m}") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	// lambda + rho = 4 omega is separated; 2 omega is not
	auto r = verify_weyl_formula(ba, Rat(3) * d->fw[0], +1, s);
	CHECK(r.pass);
	CHECK_THROWS_AS(verify_weyl_formula(ba, d->fw[0], +1, s),
	                NotDefinedAtParameters);
}

TEST_CASE("symmetrization consistency") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Vec lt = Rat(3) * d->fw[0];
	Vec mt = Rat(2) * d->fw[0];
	Session s = make_session(*d, 1, {lt, mt});
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	auto r = verify_symmetrization(ba, lt, mt, s);
	CHECK(r.pass);
}

TEST_CASE("CMM integral: A1 and A2") {
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
		Vec lam = Rat(2) * d->fw[0];
		Vec mu = Rat(3) * d->fw[0];
		Session s = make_session(*d, 1, {lam, mu});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		auto r = verify_cmm_integral(ba, lam, mu, s);
		CHECK(r.pass);
		CHECK(r.tail_bound > 0);
		CHECK(r.rel_err < 1e-9);
		auto rc = verify_cmm_compact(ba, lam, mu, s);
		CHECK(rc.pass);
		NumericOptions bad;
		bad.tol = 0.0;
		CHECK_THROWS_AS(verify_cmm_integral(ba, lam, mu, s, bad),
		                ToleranceUnreachable);
	}
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(2)});
		Vec lam = Rat(2) * d->fw[0];
		Vec mu = d->fw[0];
		Session s = make_session(*d, 1, {lam, mu});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		CHECK(verify_cmm_integral(ba, lam, mu, s).pass);
	}
	{
		auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
		Vec lam = d->fw[0] + d->fw[1];
		Vec mu = Rat(2) * d->fw[0];
		Session s = make_session(*d, 1, {lam, mu});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		auto r = verify_cmm_integral(ba, lam, mu, s);
		CHECK(r.pass);
		CHECK(verify_cmm_compact(ba, lam, mu, s).pass);
	}
}

TEST_CASE("q-Macdonald-Mehta: both parameter regimes") {
	for (long m : {1L, 2L}) {
		CAPTURE(m);
		auto d = build_root_datum(Case::b, "A", 1, {Rat(m)});
		Session s = make_session(*d, 1);
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		CHECK(verify_qmm(ba, 1, s).pass);
		CHECK(verify_qmm(ba, 2, s).pass);
	}
	auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	CHECK(verify_qmm(ba, 1, s).pass);
	CHECK(verify_qmm(ba, 2, s).pass);
}

TEST_CASE("Cherednik-Macdonald-Mehta for Macdonald polynomials") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 1);
	auto ba = construct_ba_linear(d, s);
	normalize(ba, s);
	CHECK(verify_cherednik_macdonald(ba, Vec(d->dim, Rat(0)),
	                                 Vec(d->dim, Rat(0)), s)
	          .pass);
	CHECK(verify_cherednik_macdonald(ba, d->fw[0], d->fw[0], s).pass);
	CHECK(verify_cherednik_macdonald(ba, Rat(2) * d->fw[0], d->fw[0], s).pass);
}

TEST_CASE("summation formula over xi + P") {
	NumericOptions opt;
	opt.tol = 1e-8;
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
		Vec lam = Rat(2) * d->fw[0];
		Vec mu = d->fw[0];
		Session s = make_session(*d, 1, {lam, mu});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		for (const Rat& c : {Rat(2, 7), Rat(3, 8), Rat(-5, 9)}) {
			auto r = verify_summation(ba, lam, mu, c * d->fw[0], s, opt);
			CHECK(r.pass);
		}
		CHECK_THROWS_AS(verify_summation(ba, lam, mu, Vec(d->dim, Rat(0)), s, opt),
		                NonGenericXi);
	}
	{
		auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
		Vec lam = d->fw[0] + d->fw[1];
		Vec mu = d->fw[1];
		Session s = make_session(*d, 1, {lam, mu});
		auto ba = construct_ba_linear(d, s);
		normalize(ba, s);
		std::vector<Vec> xis = {Rat(2, 7) * d->fw[0] + Rat(3, 11) * d->fw[1],
		                        Rat(3, 8) * d->fw[0] - Rat(2, 9) * d->fw[1],
		                        Rat(5, 13) * (d->fw[0] + d->fw[1])};
		for (const Vec& xi : xis) CHECK(verify_summation(ba, lam, mu, xi, s, opt).pass);
	}
}

TEST_CASE("twisted CMM") {
	NumericOptions opt;
	opt.tol = 1e-8;
	{
		auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
		Vec lam = Rat(2) * d->fw[0];
		Vec mu = d->fw[0];
		Session s = make_session(*d, 2, {lam, mu});
		auto ba = construct_ba_linear(d, s, 1);
		normalize(ba, s);
		auto ba2 = construct_ba_linear(d, s, 2);
		normalize(ba2, s);
		CHECK(verify_twisted_cmm(ba, ba2, lam, mu, s, opt).pass);
	}
	{
		auto d = build_root_datum(Case::a, "A", 2, {Rat(1)});
		Vec lam = d->fw[0] + d->fw[1];
		Vec mu = d->fw[0];
		Session s = make_session(*d, 2, {lam, mu});
		auto ba = construct_ba_linear(d, s, 1);
		normalize(ba, s);
		auto ba2 = construct_ba_linear(d, s, 2);
		normalize(ba2, s);
		CHECK(verify_twisted_cmm(ba, ba2, lam, mu, s, opt).pass);
	}
}

TEST_CASE("twisted operator discovery: A1, ell = 2") {
	auto d = build_root_datum(Case::b, "A", 1, {Rat(1)});
	Session s = make_session(*d, 2);
	auto ba2 = construct_ba_linear(d, s, 2);
	normalize(ba2, s);
	VerificationReport rep;
	auto op = discover_twisted_operator(ba2, d->fw[0], 4, s, &rep);
	CHECK(rep.pass);
	CHECK(op.terms.count(key_of(Rat(2) * d->fw[0], op.scale)) == 1);
	CHECK(op.terms.count(key_of(Rat(-2) * d->fw[0], op.scale)) == 1);
}

TEST_CASE("twisted operator discovery: A2, ell = 2, commuting pair") {
	auto d = build_root_datum(Case::b, "A", 2, {Rat(1)});
	Session s = make_session(*d, 2);
	auto ba2 = construct_ba_linear(d, s, 2);
	normalize(ba2, s);
	VerificationReport r1, r2;
	auto op1 = discover_twisted_operator(ba2, d->fw[0], 4, s, &r1);
	auto op2 = discover_twisted_operator(ba2, d->fw[1], 4, s, &r2);
	CHECK(r1.pass);
	CHECK(r2.pass);
	std::vector<Vec> nus = {Vec(d->dim, Rat(0)), d->fw[0], d->fw[1],
	                        d->fw[0] + d->fw[1], Rat(2) * d->fw[0]};
	for (const Vec& nu : nus) {
		LPoly f = orbit_poly(*d, nu, s.scale);
		LCoeff a = apply_spectral(op2, apply_spectral(op1, f, s), s);
		LCoeff b = apply_spectral(op1, apply_spectral(op2, f, s), s);
		CHECK(a == b);
	}
}

TEST_CASE("report rendering is stable") {
	VerificationReport r;
	r.id = "demo";
	r.params = "lambda=[1/2]";
	r.lhs = "0";
	r.rhs = "0";
	r.pass = true;
	CHECK(r.json_line() ==
	      "{\"id\":\"demo\",\"params\":\"lambda=[1/2]\",\"lhs\":\"0\","
	      "\"rhs\":\"0\",\"abs_err\":0,\"rel_err\":0,\"verdict\":\"pass\","
	      "\"tail_bound\":0,\"truncation\":0}");
}
