#pragma once

#include "sepauto/errors.hpp"
#include "sepauto/tensor.hpp"
#include "sepauto/hermitian.hpp"
#include "sepauto/random.hpp"
#include "sepauto/states.hpp"
#include "sepauto/superop.hpp"
#include "sepauto/decompose.hpp"
#include "sepauto/pnr.hpp"
#include "sepauto/io.hpp"
