#ifndef PERJET_PERJET_HPP
#define PERJET_PERJET_HPP

#include "chart_io.hpp"
#include "connection.hpp"
#include "criteria.hpp"
#include "expr.hpp"
#include "flag.hpp"
#include "flag_jet.hpp"
#include "jet.hpp"
#include "lie.hpp"
#include "matrix.hpp"
#include "mazur.hpp"
#include "multi_index.hpp"
#include "period.hpp"
#include "polynomial.hpp"
#include "prime_field.hpp"
#include "rational.hpp"
#include "rational_function.hpp"
#include "report.hpp"
#include "series.hpp"
#include "subspace.hpp"
#include "tensor.hpp"

#endif
