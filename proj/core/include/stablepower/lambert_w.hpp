#pragma once

namespace stablepower {

/// Real Lambert W: the w with w * e^w = z on branch 0 (w >= -1) or branch -1 (w <= -1).
///
/// Halley iteration from branch-specific starting points; for large |ln|z|| the
/// iteration runs on the logarithmic form w + ln|w| = ln|z| so nothing overflows.
/// Throws DomainError when z < -1/e, when branch is not 0 or -1, or when branch -1
/// is asked for z >= 0.
double lambert_w(int branch, double z);

/// Branch -1 evaluated from log_neg_z = ln(-z), for arguments too small to hold in a
/// double (z = -exp(log_neg_z)). Requires log_neg_z <= -1.
double lambert_wm1_from_log(double log_neg_z);

}  // namespace stablepower
