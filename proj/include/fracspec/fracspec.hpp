#pragma once

#include "fracspec/bounds.hpp"
#include "fracspec/cantor.hpp"
#include "fracspec/config.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/hadamard.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/io.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/spectra.hpp"
