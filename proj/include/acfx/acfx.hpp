#pragma once

#include "acfx/certificate.hpp"
#include "acfx/errors.hpp"
#include "acfx/invariants.hpp"
#include "acfx/oracle.hpp"
#include "acfx/presentation.hpp"
#include "acfx/search.hpp"
#include "acfx/word.hpp"
