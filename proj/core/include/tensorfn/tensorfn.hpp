#pragma once

#include "tensorfn/closed_forms.hpp"
#include "tensorfn/coefficients.hpp"
#include "tensorfn/derivatives.hpp"
#include "tensorfn/errors.hpp"
#include "tensorfn/inverse_gradient.hpp"
#include "tensorfn/multilinear.hpp"
#include "tensorfn/oracle.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/spectrum.hpp"
#include "tensorfn/sym_tensor.hpp"
