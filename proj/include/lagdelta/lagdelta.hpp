#pragma once

#include "lagdelta/campaign.hpp"
#include "lagdelta/coefficients.hpp"
#include "lagdelta/delta.hpp"
#include "lagdelta/equality.hpp"
#include "lagdelta/error.hpp"
#include "lagdelta/immersion.hpp"
#include "lagdelta/inequality.hpp"
#include "lagdelta/io.hpp"
#include "lagdelta/quadratic_forms.hpp"
#include "lagdelta/random.hpp"
#include "lagdelta/rational.hpp"
#include "lagdelta/tensor.hpp"
