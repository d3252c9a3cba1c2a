#pragma once

#include "condsym/catalog.hpp"
#include "condsym/errors.hpp"
#include "condsym/fields.hpp"
#include "condsym/grammar.hpp"
#include "condsym/jet2.hpp"
#include "condsym/linalg.hpp"
#include "condsym/operators.hpp"
#include "condsym/scans.hpp"
#include "condsym/solutions.hpp"
#include "condsym/symmetry.hpp"
#include "condsym/verify.hpp"
