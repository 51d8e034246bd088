#include "avfc/verify.hpp"

#include "avfc/error.hpp"

namespace avfc {

std::string_view to_string(Certificate c) { return c == Certificate::Nominal ? "nominal" : "reconfigured"; }

std::string_view to_string(Verdict v) { return v == Verdict::Certified ? "certified" : "not_certified"; }

ConditionReport check_condition(const Mat& a, const Mat& p, Certificate label) {
    if (!a.is_square() || !p.is_square() || a.rows() != p.rows())
        throw DimensionMismatch("check_condition needs square A and P of equal size");
    ConditionReport r;
    r.label = label;
    r.P_used = symmetrized(p);
    r.Q = -1.0 * (a.transpose() * r.P_used + r.P_used * a);
    r.Q = symmetrized(r.Q);
    r.eig_Q = eig_symmetric(r.Q);
    r.eig_P = eig_symmetric(r.P_used);
    r.Q_pd = is_positive_definite(r.Q);
    r.P_pd = is_positive_definite(r.P_used);
    r.verdict = r.Q_pd && r.P_pd ? Verdict::Certified : Verdict::NotCertified;
    return r;
}

LyapunovCertificate synthesize_p(const Mat& a, const Mat& q, Certificate label) {
    LyapunovCertificate out;
    out.P = solve_lyapunov(a, q);
    out.residual = (a.transpose() * out.P + out.P * a + q).max_abs();
    out.report = check_condition(a, out.P, label);
    return out;
}

} // namespace avfc
