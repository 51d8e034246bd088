#pragma once

#include "avfc/numerics.hpp"

#include <string_view>
#include <vector>

namespace avfc {

enum class Certificate { Nominal, Reconfigured };
enum class Verdict { Certified, NotCertified };

std::string_view to_string(Certificate c);
std::string_view to_string(Verdict v);

/// Lyapunov certificate check for A^T P + P A = -Q.
struct ConditionReport {
    Certificate label = Certificate::Nominal;
    Mat P_used;
    Mat Q;                    // -(A^T P + P A)
    std::vector<double> eig_Q; // ascending
    std::vector<double> eig_P; // ascending
    bool Q_pd = false;
    bool P_pd = false;
    Verdict verdict = Verdict::NotCertified;
};

/// Throws NotSymmetric if P is asymmetric beyond kSymmetryTol.
ConditionReport check_condition(const Mat& a, const Mat& p, Certificate label);

struct LyapunovCertificate {
    Mat P;
    ConditionReport report;
    double residual = 0.0; // max |A^T P + P A + Q|
};

/// P = solve_lyapunov(A, Q) plus its report. Throws SingularSystem when A
/// has eigenvalues summing to zero.
LyapunovCertificate synthesize_p(const Mat& a, const Mat& q, Certificate label = Certificate::Reconfigured);
inline LyapunovCertificate synthesize_p(const Mat& a) { return synthesize_p(a, Mat::identity(a.rows())); }

} // namespace avfc
