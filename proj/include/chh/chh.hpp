#pragma once

#include "chh/csschh.hpp"
#include "chh/datagen.hpp"
#include "chh/errors.hpp"
#include "chh/evaluation.hpp"
#include "chh/exact_oracle.hpp"
#include "chh/keys.hpp"
#include "chh/mgchh.hpp"
#include "chh/misra_gries.hpp"
#include "chh/pair_io.hpp"
#include "chh/random.hpp"
#include "chh/report.hpp"
#include "chh/report_io.hpp"
#include "chh/space_saving.hpp"
