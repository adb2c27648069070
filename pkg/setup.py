from setuptools import setup, find_packages
import os

# Read the contents of your README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

# Read version from __init__.py
def get_version():
    with open(os.path.join(this_directory, 'gevreyflow', '__init__.py'), 'r') as f:
        for line in f:
            if line.startswith('__version__'):
                return line.split('=')[1].strip().strip('"').strip("'")
    return "0.1.0"

setup(
    name="gevreyflow",
    version=get_version(),
    description="Formal flows, Gevrey growth diagnostics and Laplace integrals",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["gevreyflow", "gevreyflow.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.7",
        "pandas>=1.3",
        "human_readable>=1.3",
        "python-dotenv>=0.19",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "pytest-cov",
            "hypothesis>=6.0",
            "mpmath>=1.2",
            "black",
            "flake8",
            "mypy",
        ],
    },
    entry_points={
        "console_scripts": ["gevreyflow=gevreyflow.cli:main"],
    },
    include_package_data=True,
    zip_safe=False,
)
