#pragma once

#include "liewe/error.hpp"
#include "liewe/tensor.hpp"
#include "liewe/linalg.hpp"
#include "liewe/liealg.hpp"
#include "liewe/riemann.hpp"
#include "liewe/weyl.hpp"
#include "liewe/almost_abelian.hpp"
#include "liewe/catalog3d.hpp"
#include "liewe/mla.hpp"
#include "liewe/report.hpp"
