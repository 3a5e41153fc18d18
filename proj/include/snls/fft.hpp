#pragma once

#include <vector>

#include "snls/grid.hpp"

namespace snls {

// FFTW convention: forward is sum_j f_j e^{-i k x_j} (unnormalized),
// inverse here includes the 1/n factor so inverse(forward(f)) == f up to
// roundoff. Plans are cached per size in thread-local storage; plan creation
// is serialized (the FFTW planner is not thread-safe).

std::vector<cdouble> fft_forward(const std::vector<cdouble>& in);
std::vector<cdouble> fft_inverse(const std::vector<cdouble>& in);

void fft_forward_inplace(std::vector<cdouble>& data);
void fft_inverse_inplace(std::vector<cdouble>& data);

}  // namespace snls
