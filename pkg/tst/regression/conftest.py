# Collect the regression scripts under scripts/tests/ as pytest items.
#
# Each item runs prepare(), run() and analyze() from this directory exactly as
# run_tests.py does, and passes when analyze() returns a true value.

# Modules
import os
import sys
from importlib import import_module, reload

import pytest

sys.dont_write_bytecode = True
_here = os.path.dirname(os.path.abspath(__file__))
_tests = os.path.join(_here, 'scripts', 'tests')


def pytest_collect_file(parent, file_path):
    path = str(file_path)
    if (path.endswith('.py') and os.path.dirname(os.path.dirname(path)) == _tests
            and os.path.basename(path) != '__init__.py'):
        return RegressionFile.from_parent(parent, path=file_path)


class RegressionFile(pytest.File):
    def collect(self):
        yield RegressionItem.from_parent(self, name=self.path.stem)


class RegressionItem(pytest.Item):
    def runtest(self):
        cwd = os.getcwd()
        os.chdir(_here)
        if _here not in sys.path:
            sys.path.insert(0, _here)
        suite = os.path.basename(os.path.dirname(str(self.path)))
        try:
            eswmt = import_module('scripts.utils.eswmt')
            module = reload(import_module('scripts.tests.{0}.{1}'
                                          .format(suite, self.name)))
            eswmt.clean()
            eswmt.global_run_args = []
            eswmt.global_silent = True
            module.prepare()
            module.run()
            result = module.analyze()
        finally:
            import_module('scripts.utils.eswmt').clean()
            os.chdir(cwd)
        assert result, '{0}/{1}.py analyze() reported failure'.format(suite,
                                                                     self.name)

    def reportinfo(self):
        return self.path, None, 'regression: ' + self.name
