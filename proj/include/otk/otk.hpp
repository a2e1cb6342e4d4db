#pragma once

#include "otk/errors.hpp"
#include "otk/matrix.hpp"
#include "otk/tolerance.hpp"
#include "otk/linalg.hpp"
#include "otk/random.hpp"
#include "otk/attainment.hpp"
#include "otk/numrange.hpp"
#include "otk/bj_orth.hpp"
#include "otk/schaffer.hpp"
#include "otk/rho_dilation.hpp"
#include "otk/commuting.hpp"
#include "otk/io.hpp"
#include "otk/properties.hpp"
#include "otk/reproduce.hpp"
