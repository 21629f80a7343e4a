from setuptools import setup, find_packages

setup(
    name="oddmagic",
    version="0.1.0",
    description="Odd-order magic squares shifted by an exact offset N: generator, verifier and 3x3 oracle",
    packages=find_packages(include=["components", "components.*"]),
    py_modules=["app"],
    python_requires=">=3.9",
    install_requires=["numpy", "pydantic>=2"],
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["oddmagic=app:main"]},
)
