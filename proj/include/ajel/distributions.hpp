#pragma once

namespace ajel {

/// Standard normal quantile, Wichura's AS 241 (PPND16); relative error
/// about 1e-16 over (0, 1).
double normal_quantile(double p);

/// P(chi2_1 <= x) = erf(sqrt(x / 2)). x = +inf gives 1.
double chi2_df1_cdf(double x);

/// 1 - chi2_df1_cdf(x), computed with erfc to keep upper-tail precision.
double chi2_df1_sf(double x);

/// q with P(chi2_1 <= q) = p: the squared normal quantile at (1 + p) / 2,
/// evaluated through the lower tail (1 - p) / 2 for accuracy near p = 1.
double chi2_df1_quantile(double p);

}  // namespace ajel
