#pragma once

#include "bqa/field.hpp"
#include "bqa/matrix.hpp"
#include "bqa/linalg.hpp"
#include "bqa/quiver.hpp"
#include "bqa/algebra.hpp"
#include "bqa/representation.hpp"
#include "bqa/module_ops.hpp"
#include "bqa/resolution.hpp"
#include "bqa/isomorphism.hpp"
#include "bqa/syzygy.hpp"
#include "bqa/approx.hpp"
#include "bqa/enumerate.hpp"
#include "bqa/cogenerator.hpp"
#include "bqa/io/spec_file.hpp"
#include "bqa/io/graph.hpp"
#include "bqa/io/report.hpp"
#include "bqa/io/candidates.hpp"
