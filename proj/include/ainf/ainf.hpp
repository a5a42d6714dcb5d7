#pragma once

#include "ainf/error.hpp"
#include "ainf/ff_linalg.hpp"
#include "ainf/resolution.hpp"
#include "ainf/endo_dga.hpp"
#include "ainf/kadeishvili.hpp"
#include "ainf/stasheff.hpp"
#include "ainf/notation.hpp"
#include "ainf/structure_file.hpp"
#include "ainf/cli.hpp"
