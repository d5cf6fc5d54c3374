#pragma once

#include "ftspec/error.hpp"
#include "ftspec/pauli.hpp"
#include "ftspec/circuit.hpp"
#include "ftspec/truth_table.hpp"
#include "ftspec/spec_format.hpp"
#include "ftspec/verifier.hpp"
#include "ftspec/frame.hpp"
#include "ftspec/compile.hpp"
#include "ftspec/transforms.hpp"
#include "ftspec/oracle.hpp"
