# -*- coding: utf-8 -*-
import sys
from hermrbc.cli import main

sys.exit(main())
