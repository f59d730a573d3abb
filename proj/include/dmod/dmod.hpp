#pragma once

#include "dmod/constructions.hpp"
#include "dmod/delta.hpp"
#include "dmod/errors.hpp"
#include "dmod/extremal.hpp"
#include "dmod/int_matrix.hpp"
#include "dmod/integer.hpp"
#include "dmod/linalg.hpp"
#include "dmod/matroid_view.hpp"
#include "dmod/points.hpp"
#include "dmod/structures.hpp"
#include "dmod/text_format.hpp"
