#pragma once

#include "sharpcert/certificate_io.hpp"
#include "sharpcert/interval.hpp"
#include "sharpcert/kernels.hpp"
#include "sharpcert/oracle/montecarlo.hpp"
#include "sharpcert/oracle/quadrature.hpp"
#include "sharpcert/polys.hpp"
#include "sharpcert/scalars.hpp"
#include "sharpcert/scheme.hpp"
#include "sharpcert/specfun.hpp"
