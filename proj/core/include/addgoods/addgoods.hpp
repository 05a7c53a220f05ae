// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "addgoods/arith.hpp"
#include "addgoods/bounded.hpp"
#include "addgoods/io.hpp"
#include "addgoods/model.hpp"
#include "addgoods/oracle.hpp"
#include "addgoods/unbounded.hpp"
